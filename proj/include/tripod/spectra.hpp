#ifndef TRIPOD_SPECTRA_HPP
#define TRIPOD_SPECTRA_HPP

#include <string>
#include <vector>

#include "tripod/model.hpp"

namespace tripod {

enum class Backend { kAnalytic, kNumeric };

std::string to_string(Backend backend);
Backend backend_from_string(const std::string& name);

struct SweepSpec {
  Configuration configuration = Configuration::kSigmaProbe;
  Backend model = Backend::kAnalytic;
  double delta_min_hz = -300e3;
  double delta_max_hz = 300e3;
  int points = 2001;
  std::vector<double> powers_mW{1.0, 10.0, 22.0};
  std::vector<double> b_fields_mG{0.0, 10.0, 30.0};
  double optical_depth = 1.0;
  double coupling_detuning_bar = 0.0;
  double probe_ratio = 1e-2;  // numeric backend: Omega_P / Omega_C
  RelaxationRates rates = RelaxationRates::defaults();

  void validate() const;  // min < max, points >= 3, powers >= 0, fields non-empty
};

// One sweep sample. re_chi/im_chi are normalized by the bare-absorption peak
// of the configuration, so transmission = exp(-optical_depth * im_chi).
struct SpectrumRow {
  Configuration config;
  double power_mW;
  double b_mG;
  double delta_hz;
  double re_chi;
  double im_chi;
  double transmission;
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;  // sorted by (power, B, delta); uniform delta grid

  // Row indices of one (power, B) spectrum, in delta order.
  std::vector<std::size_t> spectrum_indices(double power_mW, double b_mG) const;
  std::vector<double> deltas_hz(const std::vector<std::size_t>& idx) const;
  std::vector<double> transmissions(const std::vector<std::size_t>& idx) const;
  std::vector<double> im_chis(const std::vector<std::size_t>& idx) const;
};

// Beer-Lambert transmission exp(-optical_depth * im_chi_normalized), where
// im_chi_normalized is Im chi divided by the bare-absorption peak value.
double transmission(double im_chi_normalized, double optical_depth);

// Runs the (power, B, delta) grid with the selected backend. Deterministic
// output ordering regardless of thread count. Numeric-backend failures are
// rethrown with the offending (configuration, power, B, delta) attached.
SpectrumTable run_sweep(const SweepSpec& spec, int threads = 1);

}  // namespace tripod

#endif
