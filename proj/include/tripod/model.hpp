#ifndef TRIPOD_MODEL_HPP
#define TRIPOD_MODEL_HPP

#include <string>

#include "tripod/units.hpp"

namespace tripod {

// Tripod beam geometry relative to the quantization (magnetic field) axis.
//   kSigmaProbe: probe polarized perpendicular to B (sigma+- components drive
//                e<->g-/g+), coupling parallel (pi, drives e<->g0).
//   kPiProbe:    probe parallel to B (pi, drives e<->g0), coupling
//                perpendicular (sigma+- components drive e<->g-/g+).
enum class Configuration { kSigmaProbe, kPiProbe };

std::string to_string(Configuration config);
Configuration configuration_from_string(const std::string& name);

// How decay rates quoted in s^-1 are mapped to barred units.
//   kAngular: rate / (2*pi*1e9)  (default; keeps the closed forms' Gamma_R_bar ~ 1.59e-6)
//   kLinear:  rate / 1e9
enum class RateScaling { kAngular, kLinear };

// Scaled decay rate of the optical (excited-ground) coherences. Fixed by the
// effective treatment of the Doppler-broadened line, not by gamma0_bar/2.
inline constexpr double kOpticalCoherenceRateBar = 1.0 / 3.0;

struct RelaxationRates {
  double gamma0_bar;  // excited-state spontaneous decay, split equally over the ground states
  double gammaT_bar;  // transit relaxation toward the isotropic ground mixture
  double gammaR_bar;  // total ground-ground (Raman) coherence decay
  double optical_bar = kOpticalCoherenceRateBar;  // optical coherence decay

  // From the quoted lab rates Gamma_0 = 1e7, Gamma_t = 1e3, Gamma_R = 1e4 s^-1.
  static RelaxationRates defaults(RateScaling scaling = RateScaling::kAngular);
  static RelaxationRates from_si(double gamma0_s, double gammaT_s, double gammaR_s,
                                 RateScaling scaling = RateScaling::kAngular);

  // all rates >= 0 and gammaR_bar >= gammaT_bar (Raman decay includes the transit contribution)
  void validate() const;
};

struct DriveField {
  enum class Role { kProbe, kCoupling };
  Role role;
  double rabi_bar = 0.0;              // Omega_bar >= 0
  double optical_detuning_bar = 0.0;  // Delta_bar

  // First-order probe treatment is quoted for Omega_P <= 1e-3 * Omega_C.
  static bool perturbative(double probe_rabi_bar, double coupling_rabi_bar);
  void validate() const;
};

struct ZeemanField {
  double b_milligauss = 0.0;
  double delta_z_bar = 0.0;  // scaled splitting, 2.8 kHz per mG exactly

  static constexpr double kSplittingHzPerMilligauss = 2.8e3;
  static ZeemanField from_milligauss(double b_mG);
  void validate() const;  // enforces delta_z_bar == scale_frequency(2.8 kHz * B)
};

struct MediumGeometry {
  double length_cm = 6.0;
  double optical_depth = 1.0;  // kL times the lumped absorption prefactor; free scale
  void validate() const;
};

struct TripodModel {
  Configuration configuration = Configuration::kSigmaProbe;
  DriveField probe{DriveField::Role::kProbe};
  DriveField coupling{DriveField::Role::kCoupling};
  ZeemanField zeeman;
  RelaxationRates rates = RelaxationRates::defaults();
  MediumGeometry geometry;

  // Raman detuning delta_bar = probe detuning - coupling detuning.
  double raman_detuning_bar() const {
    return probe.optical_detuning_bar - coupling.optical_detuning_bar;
  }

  // Keeps the coupling detuning fixed and moves the probe.
  void set_raman_detuning_bar(double delta_bar) {
    probe.optical_detuning_bar = coupling.optical_detuning_bar + delta_bar;
  }

  static TripodModel make(Configuration config, double probe_rabi_bar, double coupling_rabi_bar,
                          double raman_detuning_bar, double coupling_detuning_bar,
                          ZeemanField zeeman, RelaxationRates rates = RelaxationRates::defaults(),
                          MediumGeometry geometry = {});

  void validate() const;
};

}  // namespace tripod

#endif
