#include "tripod/model.hpp"

#include <cmath>
#include <stdexcept>

namespace tripod {

std::string to_string(Configuration config) {
  return config == Configuration::kSigmaProbe ? "probe-sigma" : "probe-pi";
}

Configuration configuration_from_string(const std::string& name) {
  if (name == "probe-sigma") return Configuration::kSigmaProbe;
  if (name == "probe-pi") return Configuration::kPiProbe;
  throw std::invalid_argument("unknown configuration '" + name +
                              "' (expected probe-sigma or probe-pi)");
}

RelaxationRates RelaxationRates::defaults(RateScaling scaling) {
  return from_si(1e7, 1e3, 1e4, scaling);
}

RelaxationRates RelaxationRates::from_si(double gamma0_s, double gammaT_s, double gammaR_s,
                                         RateScaling scaling) {
  const double scale =
      scaling == RateScaling::kAngular ? kAngularRateScale : kFrequencyScaleHz;
  RelaxationRates rates{gamma0_s / scale, gammaT_s / scale, gammaR_s / scale};
  rates.validate();
  return rates;
}

void RelaxationRates::validate() const {
  if (!(gamma0_bar >= 0.0) || !(gammaT_bar >= 0.0) || !(gammaR_bar >= 0.0) ||
      !(optical_bar >= 0.0)) {
    throw std::invalid_argument("RelaxationRates: rates must be non-negative");
  }
  if (gammaR_bar < gammaT_bar) {
    throw std::invalid_argument(
        "RelaxationRates: gammaR_bar must not be below gammaT_bar (Raman decay includes the "
        "transit contribution)");
  }
}

bool DriveField::perturbative(double probe_rabi_bar, double coupling_rabi_bar) {
  return probe_rabi_bar <= 1e-3 * coupling_rabi_bar;
}

void DriveField::validate() const {
  if (!(rabi_bar >= 0.0)) {
    throw std::invalid_argument("DriveField: Rabi frequency must be non-negative");
  }
  if (!std::isfinite(optical_detuning_bar)) {
    throw std::invalid_argument("DriveField: detuning must be finite");
  }
}

ZeemanField ZeemanField::from_milligauss(double b_mG) {
  if (!std::isfinite(b_mG)) {
    throw std::domain_error("ZeemanField: magnetic field must be finite");
  }
  ZeemanField field;
  field.b_milligauss = b_mG;
  field.delta_z_bar = scale_frequency(kSplittingHzPerMilligauss * b_mG);
  return field;
}

void ZeemanField::validate() const {
  const double expected = scale_frequency(kSplittingHzPerMilligauss * b_milligauss);
  if (delta_z_bar != expected) {
    throw std::invalid_argument("ZeemanField: delta_z_bar inconsistent with 2.8 kHz/mG");
  }
}

void MediumGeometry::validate() const {
  if (!(optical_depth >= 0.0)) {
    throw std::invalid_argument("MediumGeometry: optical depth must be non-negative");
  }
  if (!(length_cm > 0.0)) {
    throw std::invalid_argument("MediumGeometry: cell length must be positive");
  }
}

TripodModel TripodModel::make(Configuration config, double probe_rabi_bar,
                              double coupling_rabi_bar, double raman_detuning_bar,
                              double coupling_detuning_bar, ZeemanField zeeman,
                              RelaxationRates rates, MediumGeometry geometry) {
  TripodModel model;
  model.configuration = config;
  model.probe = {DriveField::Role::kProbe, probe_rabi_bar,
                 coupling_detuning_bar + raman_detuning_bar};
  model.coupling = {DriveField::Role::kCoupling, coupling_rabi_bar, coupling_detuning_bar};
  model.zeeman = zeeman;
  model.rates = rates;
  model.geometry = geometry;
  model.validate();
  return model;
}

void TripodModel::validate() const {
  if (probe.role != DriveField::Role::kProbe || coupling.role != DriveField::Role::kCoupling) {
    throw std::invalid_argument("TripodModel: exactly one probe and one coupling drive required");
  }
  probe.validate();
  coupling.validate();
  zeeman.validate();
  rates.validate();
  geometry.validate();
}

}  // namespace tripod
