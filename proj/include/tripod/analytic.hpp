#ifndef TRIPOD_ANALYTIC_HPP
#define TRIPOD_ANALYTIC_HPP

#include <Eigen/Dense>
#include <complex>

#include "tripod/liouvillian.hpp"
#include "tripod/model.hpp"

namespace tripod {

// Closed-form first-order probe susceptibilities of the two tripod
// configurations. All inputs barred; amplitude is the lumped scale that
// multiplies the whole expression and never affects the shape.

struct SigmaProbeParams {
  double delta_bar = 0.0;
  double delta_z_bar = 0.0;
  double delta_c_bar = 0.0;
  double omega_c_bar = 0.0;
  double gamma_r_bar = RelaxationRates::defaults().gammaR_bar;
  double amplitude = 1.0;

  double a_minus() const { return delta_bar - delta_z_bar; }
  double a_plus() const { return delta_bar + delta_z_bar; }
  // Half-width of each transparency Lorentzian.
  double lambda_width() const { return gamma_r_bar + 0.75 * omega_c_bar * omega_c_bar; }
};

struct PiProbeParams {
  double delta_bar = 0.0;
  double delta_z_bar = 0.0;
  double delta_c_bar = 0.0;
  double omega_c_bar = 0.0;
  double gamma_r_bar = RelaxationRates::defaults().gammaR_bar;
  double amplitude = 1.0;

  double a_minus() const { return delta_bar - delta_z_bar; }
  double a_plus() const { return delta_bar + delta_z_bar; }
};

// Sigma-probe susceptibility: sum of the two independent detuned EIT terms,
// one per probed transition. gamma_r_bar = 0 is handled via the exact
// dark-resonance limit (term -> 0 at a = 0).
std::complex<double> chi_sigma_probe(const SigmaProbeParams& p);

// Two-Lorentzian approximation to Im[chi_sigma_probe]: transparency dips of
// half-width lambda centered at delta = +-Delta_Z on the flat background
// 3*amplitude/sqrt(2).
double im_chi_sigma_probe_lorentzian(const SigmaProbeParams& p);

// Pi-probe susceptibility: the two coupling-dressed dark resonances interfere;
// numerator (a- - i gammaR)(a+ - i gammaR) vanishes at the detuned dark states.
std::complex<double> chi_pi_probe(const PiProbeParams& p);

// Rational approximation to Im[chi_pi_probe] (valid at delta_c_bar = 0);
// exact in the gamma_r -> 0 and far-detuned limits.
double im_chi_pi_probe(const PiProbeParams& p);

// Reference three-level lambda-EIT susceptibility:
//   amplitude / [2(delta + Delta_C - i/3) - |Omega_C|^2 / (2(delta - i gammaR))]
// gamma_r_bar = 0 with omega_c_bar > 0 gives ideal transparency at delta = 0.
std::complex<double> chi_three_level(double delta_bar, double omega_c_bar, double gamma_r_bar,
                                     double delta_c_bar, double amplitude);

struct ThreeLevelParams {
  double omega_c_bar;    // effective coupling: the two sigma components in quadrature
  double omega_p_bar;
  double gamma_r_bar;
  double delta_c_bar;
  double amplitude;
};

struct MorrisShoreReduction {
  ThreeLevelParams effective;
  Matrix4cd rotation;             // basis change (e, g-, g0, g+) -> (e, NC, g0, C)
  Matrix4cd rotated_hamiltonian;  // exact zero in the NC row/column
};

// Reduces the degenerate pi-probe tripod (B = 0) to the equivalent
// three-level system (|C>, |g0>, |e>); the dark combination |NC> decouples.
// Throws std::invalid_argument for a sigma-probe model or delta_z != 0.
MorrisShoreReduction morris_shore_reduce(const TripodModel& model);

SigmaProbeParams sigma_probe_params(const TripodModel& model);
PiProbeParams pi_probe_params(const TripodModel& model);

// Dispatches on the model's configuration.
std::complex<double> chi_analytic(const TripodModel& model);

// Peak of the bare (coupling-free, resonant) absorption in this normalization:
// 3*amplitude/sqrt(2) for the sigma probe, 3*amplitude/2 for the pi probe.
double bare_absorption_peak(Configuration config, double amplitude = 1.0);

}  // namespace tripod

#endif
