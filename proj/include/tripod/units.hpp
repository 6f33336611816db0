#ifndef TRIPOD_UNITS_HPP
#define TRIPOD_UNITS_HPP

namespace tripod {

// All simulation quantities are dimensionless ("barred"): frequencies in Hz
// divided by 1e9 Hz, angular rates in s^-1 divided by 2*pi*1e9 s^-1.
inline constexpr double kFrequencyScaleHz = 1e9;
inline constexpr double kAngularRateScale = 6.283185307179586476925286766559e9;  // 2*pi*1e9

struct PhysicalConstants {
  double bohr_magneton = 9.2740100783e-24;  // J/T
  double planck_h = 6.62607015e-34;         // J*s
  double lande_g = 2.002;                   // 2^3S_1 state
  double gamma_opt = kAngularRateScale;     // s^-1, optical coherence decay scale (1 GHz width)

  void validate() const;  // throws std::invalid_argument if any entry is not strictly positive
};

// f_bar = f / 1e9 Hz
double scale_frequency(double f_hz);
double unscale_frequency(double f_bar);

// Ground-sublevel Zeeman splitting mu_B*g*B/h in Hz; linear in B, negative B allowed.
// Throws std::domain_error for non-finite input.
double zeeman_shift(double b_milligauss, const PhysicalConstants& constants = {});

// Scaled coupling Rabi frequency from beam power, sqrt-law calibrated so that
// 22 mW maps to 8.6e-3. Throws std::domain_error for negative power.
double power_to_rabi_scaled(double p_milliwatt);

}  // namespace tripod

#endif
