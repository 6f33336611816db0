#include "tripod/units.hpp"

#include <cmath>
#include <stdexcept>

namespace tripod {

void PhysicalConstants::validate() const {
  if (!(bohr_magneton > 0.0) || !(planck_h > 0.0) || !(lande_g > 0.0) || !(gamma_opt > 0.0)) {
    throw std::invalid_argument("PhysicalConstants: all entries must be strictly positive");
  }
}

double scale_frequency(double f_hz) { return f_hz / kFrequencyScaleHz; }

double unscale_frequency(double f_bar) { return f_bar * kFrequencyScaleHz; }

double zeeman_shift(double b_milligauss, const PhysicalConstants& constants) {
  if (!std::isfinite(b_milligauss)) {
    throw std::domain_error("zeeman_shift: magnetic field must be finite");
  }
  constants.validate();
  const double b_tesla = b_milligauss * 1e-7;  // 1 mG = 1e-7 T
  return constants.bohr_magneton * constants.lande_g * b_tesla / constants.planck_h;
}

double power_to_rabi_scaled(double p_milliwatt) {
  if (!(p_milliwatt >= 0.0)) {
    throw std::domain_error("power_to_rabi_scaled: power must be non-negative");
  }
  // 22 mW calibrated to Omega_bar = 8.6e-3.
  constexpr double kCalibration = 8.6e-3;
  return kCalibration * std::sqrt(p_milliwatt / 22.0);
}

}  // namespace tripod
