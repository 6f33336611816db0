#include "tripod/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace tripod {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kOpticalHalfWidth = 1.0 / 3.0;

// One detuned EIT term 1 / [(a + Delta_C - i/3) - |Omega_C|^2 / (4 (a - i gammaR))].
// gamma_r = 0, a = 0 is a removable singularity: the dark resonance is exact
// and the term vanishes.
std::complex<double> eit_term(double a, double delta_c, double omega_c, double gamma_r) {
  if (omega_c == 0.0) {
    return 1.0 / std::complex<double>(a + delta_c, -kOpticalHalfWidth);
  }
  if (gamma_r == 0.0 && a == 0.0) return 0.0;
  const std::complex<double> raman(a, -gamma_r);
  return 1.0 / (std::complex<double>(a + delta_c, -kOpticalHalfWidth) -
                omega_c * omega_c / (4.0 * raman));
}
}  // namespace

std::complex<double> chi_sigma_probe(const SigmaProbeParams& p) {
  return p.amplitude / (2.0 * kSqrt2) *
         (eit_term(p.a_plus(), p.delta_c_bar, p.omega_c_bar, p.gamma_r_bar) +
          eit_term(p.a_minus(), p.delta_c_bar, p.omega_c_bar, p.gamma_r_bar));
}

double im_chi_sigma_probe_lorentzian(const SigmaProbeParams& p) {
  const double background = 3.0 * p.amplitude / kSqrt2;
  if (p.omega_c_bar == 0.0) return background;
  const double lambda = p.lambda_width();
  const double strength = 3.0 * p.omega_c_bar * p.omega_c_bar / 8.0;
  const double ap = p.a_plus();
  const double am = p.a_minus();
  return background *
         (1.0 - strength * (lambda / (ap * ap + lambda * lambda) +
                            lambda / (am * am + lambda * lambda)));
}

std::complex<double> chi_pi_probe(const PiProbeParams& p) {
  const std::complex<double> b(p.delta_bar + p.delta_c_bar, -kOpticalHalfWidth);
  const std::complex<double> q(p.delta_bar, -p.gamma_r_bar);
  const std::complex<double> numerator =
      std::complex<double>(p.a_minus(), -p.gamma_r_bar) *
      std::complex<double>(p.a_plus(), -p.gamma_r_bar);
  const double omega_sq = p.omega_c_bar * p.omega_c_bar;
  const std::complex<double> denominator = 2.0 * b * numerator - q * omega_sq / 2.0;
  if (denominator == 0.0) {
    // Only at gamma_r = delta = delta_z = 0 with a coupling on: ideal EIT.
    return 0.0;
  }
  return p.amplitude * numerator / denominator;
}

double im_chi_pi_probe(const PiProbeParams& p) {
  const double gr = p.gamma_r_bar;
  const double omega_sq = p.omega_c_bar * p.omega_c_bar;
  const double x = 2.0 * gr + 1.5 * omega_sq;
  const double y = p.delta_bar * p.delta_bar + p.delta_z_bar * p.delta_z_bar;
  const double a2 = p.a_minus() * p.a_minus() * p.a_plus() * p.a_plus();
  const double numerator = 2.0 * a2 + gr * y * (2.0 * gr + x) + gr * gr * gr * x;
  const double denominator = 4.0 * a2 + 4.0 * gr * x * y + x * x * gr * gr +
                             2.25 * p.delta_bar * p.delta_bar * omega_sq * omega_sq;
  if (denominator == 0.0) return 0.0;  // gamma_r = 0 on a dark resonance
  return 3.0 * p.amplitude * numerator / denominator;
}

std::complex<double> chi_three_level(double delta_bar, double omega_c_bar, double gamma_r_bar,
                                     double delta_c_bar, double amplitude) {
  if (omega_c_bar == 0.0) {
    return amplitude / (2.0 * std::complex<double>(delta_bar + delta_c_bar, -kOpticalHalfWidth));
  }
  if (gamma_r_bar == 0.0 && delta_bar == 0.0) return 0.0;  // ideal EIT
  const std::complex<double> raman(delta_bar, -gamma_r_bar);
  return amplitude /
         (2.0 * std::complex<double>(delta_bar + delta_c_bar, -kOpticalHalfWidth) -
          omega_c_bar * omega_c_bar / (2.0 * raman));
}

MorrisShoreReduction morris_shore_reduce(const TripodModel& model) {
  if (model.configuration != Configuration::kPiProbe) {
    throw std::invalid_argument("morris_shore_reduce: requires the pi-probe configuration");
  }
  if (model.zeeman.delta_z_bar != 0.0) {
    throw std::invalid_argument("Morris-Shore reduction invalid for split sublevels");
  }

  MorrisShoreReduction reduction;
  // |NC> = (|g-> - |g+>)/sqrt(2), |C> = (|g-> + |g+>)/sqrt(2).
  Matrix4cd u = Matrix4cd::Zero();
  const double s = 1.0 / kSqrt2;
  u(0, kExcited) = 1.0;
  u(1, kGroundMinus) = s;
  u(1, kGroundPlus) = -s;
  u(2, kGroundZero) = 1.0;
  u(3, kGroundMinus) = s;
  u(3, kGroundPlus) = s;
  reduction.rotation = u;

  const Matrix4cd h = build_hamiltonian(model).matrix;
  reduction.rotated_hamiltonian = u * h * u.adjoint();
  if (std::abs(reduction.rotated_hamiltonian(0, 1)) != 0.0) {
    throw std::runtime_error("morris_shore_reduce: dark state remains coupled");
  }

  // The two sigma components Omega_C/sqrt(2) add in quadrature on |C>.
  reduction.effective = {model.coupling.rabi_bar, model.probe.rabi_bar, model.rates.gammaR_bar,
                         model.coupling.optical_detuning_bar, 1.0};
  return reduction;
}

SigmaProbeParams sigma_probe_params(const TripodModel& model) {
  return {model.raman_detuning_bar(), model.zeeman.delta_z_bar,
          model.coupling.optical_detuning_bar, model.coupling.rabi_bar, model.rates.gammaR_bar,
          1.0};
}

PiProbeParams pi_probe_params(const TripodModel& model) {
  return {model.raman_detuning_bar(), model.zeeman.delta_z_bar,
          model.coupling.optical_detuning_bar, model.coupling.rabi_bar, model.rates.gammaR_bar,
          1.0};
}

std::complex<double> chi_analytic(const TripodModel& model) {
  if (model.configuration == Configuration::kSigmaProbe) {
    return chi_sigma_probe(sigma_probe_params(model));
  }
  return chi_pi_probe(pi_probe_params(model));
}

double bare_absorption_peak(Configuration config, double amplitude) {
  return config == Configuration::kSigmaProbe ? 3.0 * amplitude / kSqrt2 : 1.5 * amplitude;
}

}  // namespace tripod
