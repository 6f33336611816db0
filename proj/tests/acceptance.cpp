// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed here, not calibrated at run time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tripod/analysis.hpp"
#include "tripod/analytic.hpp"
#include "tripod/cli.hpp"
#include "tripod/spectra.hpp"
#include "tripod/steady_state.hpp"

using namespace tripod;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

struct Violation {
  double value = 0.0;
  std::string where;
};

RelaxationRates equivalence_rates() {
  // The closed forms assume ideal optical pumping; a vanishing (but nonzero)
  // transit rate realizes that regime in the full steady state.
  RelaxationRates rates = RelaxationRates::defaults();
  rates.gammaT_bar = 1e-10;
  return rates;
}

const std::vector<double> kPowers{1.0, 10.0, 22.0};
const std::vector<double> kFields{0.0, 10.0, 30.0};

std::vector<DensityMatrix>& solved_states() {
  static std::vector<DensityMatrix> states;
  return states;
}

// --- criterion 1: analytic-numeric equivalence over the full grid ----------

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  Violation worst;
  Violation worst_default;  // informative: the paper's physical transit rate
  const int points = 2001;

  for (Configuration config : {Configuration::kSigmaProbe, Configuration::kPiProbe}) {
    for (double power : kPowers) {
      for (double b : kFields) {
        SweepSpec analytic;
        analytic.configuration = config;
        analytic.points = points;
        analytic.powers_mW = {power};
        analytic.b_fields_mG = {b};

        SweepSpec numeric = analytic;
        numeric.model = Backend::kNumeric;
        numeric.probe_ratio = 1e-3;
        numeric.rates = equivalence_rates();

        const SpectrumTable a = run_sweep(analytic, cli::effective_threads());
        const SpectrumTable n = run_sweep(numeric, cli::effective_threads());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
          const double rel =
              std::abs(n.rows[i].im_chi - a.rows[i].im_chi) / std::abs(a.rows[i].im_chi);
          if (rel > worst.value) {
            std::ostringstream where;
            where << to_string(config) << " " << power << " mW " << b << " mG, delta = "
                  << a.rows[i].delta_hz << " Hz";
            worst = {rel, where.str()};
          }
        }
      }
    }
  }

  // Informative only: deviation at the physical transit rate (the closed
  // forms' population assumptions break at the few-percent level there).
  {
    SweepSpec analytic;
    analytic.configuration = Configuration::kSigmaProbe;
    analytic.points = 201;
    analytic.powers_mW = {1.0};
    analytic.b_fields_mG = {10.0};
    SweepSpec numeric = analytic;
    numeric.model = Backend::kNumeric;
    numeric.probe_ratio = 1e-3;
    const SpectrumTable a = run_sweep(analytic, cli::effective_threads());
    const SpectrumTable n = run_sweep(numeric, cli::effective_threads());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      const double rel =
          std::abs(n.rows[i].im_chi - a.rows[i].im_chi) / std::abs(a.rows[i].im_chi);
      worst_default.value = std::max(worst_default.value, rel);
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << "max rel Im chi diff " << worst.value << " at " << worst.where << "; runtime "
         << seconds << " s; at the physical transit rate the closed forms deviate by "
         << worst_default.value << " (informative)";
  report(1, "analytic-numeric equivalence on the 18-point grid", worst.value < 1e-3 && seconds < 60.0,
         detail.str());
}

// --- criterion 2: solve/evolve oracle equivalence ---------------------------

void criterion_2() {
  const std::vector<std::tuple<Configuration, double, double>> models{
      {Configuration::kSigmaProbe, 1.0, 0.0},  {Configuration::kSigmaProbe, 22.0, 30.0},
      {Configuration::kPiProbe, 1.0, 10.0},    {Configuration::kPiProbe, 22.0, 0.0},
      {Configuration::kSigmaProbe, 10.0, 10.0}, {Configuration::kPiProbe, 10.0, 30.0}};
  Violation worst;
  for (const auto& [config, power, b] : models) {
    const double omega_c = power_to_rabi_scaled(power);
    const TripodModel model =
        TripodModel::make(config, 1e-2 * omega_c, omega_c, scale_frequency(1e4), 0.0,
                          ZeemanField::from_milligauss(b));
    const LiouvillianMatrix l = build_liouvillian(model);
    const DensityMatrix via_solve = solve_steady(l);
    const DensityMatrix via_evolution = evolve_to_steady(l, DensityMatrix::ground_mixture(), 1e-9);
    solved_states().push_back(via_solve);
    const double diff = (via_solve.matrix - via_evolution.matrix).cwiseAbs().maxCoeff();
    if (diff > worst.value) {
      std::ostringstream where;
      where << to_string(config) << " " << power << " mW " << b << " mG";
      worst = {diff, where.str()};
    }
  }
  std::ostringstream detail;
  detail << "max elementwise |evolve - solve| = " << worst.value << " at " << worst.where;
  report(2, "time-evolution oracle agrees with the linear solve", worst.value < 1e-8, detail.str());
}

// --- criterion 3: closed forms vs their printed approximations --------------

void criterion_3() {
  // Exact vs rational form for the interfering configuration, as stated.
  Violation worst_pi;
  for (double power : kPowers) {
    for (double b : kFields) {
      PiProbeParams p;
      p.omega_c_bar = power_to_rabi_scaled(power);
      p.delta_z_bar = scale_frequency(ZeemanField::kSplittingHzPerMilligauss * b);
      for (int i = 0; i <= 2000; ++i) {
        p.delta_bar = scale_frequency(-3e5 + i * 300.0);
        const double exact = chi_pi_probe(p).imag();
        const double rel = std::abs(im_chi_pi_probe(p) - exact) / std::abs(exact);
        if (rel > worst_pi.value) {
          std::ostringstream where;
          where << power << " mW " << b << " mG delta " << unscale_frequency(p.delta_bar) << " Hz";
          worst_pi = {rel, where.str()};
        }
      }
    }
  }

  // Two-lorentzian approximation inside |delta| <= 3 Lambda.
  double worst_sigma = 0.0;
  for (double power : kPowers) {
    for (double b : kFields) {
      SigmaProbeParams p;
      p.omega_c_bar = power_to_rabi_scaled(power);
      p.delta_z_bar = scale_frequency(ZeemanField::kSplittingHzPerMilligauss * b);
      const double lambda = p.lambda_width();
      for (int i = 0; i <= 1200; ++i) {
        p.delta_bar = -3.0 * lambda + i * lambda / 200.0;
        const double exact = chi_sigma_probe(p).imag();
        worst_sigma = std::max(
            worst_sigma, std::abs(im_chi_sigma_probe_lorentzian(p) - exact) / std::abs(exact));
      }
    }
  }

  std::ostringstream detail;
  detail << "rational-form max rel deviation " << worst_pi.value << " at " << worst_pi.where
         << " [stated bound 1e-9 is unattainable: the printed form drops "
            "|2(a- - i gR)(a+ - i gR)| against the coupling terms; measured floor ~3.7e-4]"
         << "; two-lorentzian max rel deviation " << worst_sigma << " inside 3 Lambda";
  report(3, "closed forms vs printed approximations", worst_pi.value < 1e-9 && worst_sigma < 0.02,
         detail.str());
}

// --- criterion 4: peak geometry ---------------------------------------------

void criterion_4() {
  bool pass = true;
  std::ostringstream detail;

  for (Configuration config : {Configuration::kSigmaProbe, Configuration::kPiProbe}) {
    SweepSpec spec;
    spec.configuration = config;
    spec.points = 2001;
    spec.powers_mW = {1.0};
    spec.b_fields_mG = {10.0, 30.0};
    const SpectrumTable table = run_sweep(spec, cli::effective_threads());
    for (double b : spec.b_fields_mG) {
      const auto idx = table.spectrum_indices(1.0, b);
      const auto xs = table.deltas_hz(idx);
      const auto ts = table.transmissions(idx);
      std::vector<double> centers;
      for (const auto& f : find_extrema(xs, ts, 1e-3)) {
        if (f.kind == FeatureKind::kMaximum) centers.push_back(f.center_hz);
      }
      std::sort(centers.begin(), centers.end());
      const double expected = ZeemanField::kSplittingHzPerMilligauss * b;
      const bool ok = centers.size() == 2 && std::abs(centers.front() + expected) < 2e3 &&
                      std::abs(centers.back() - expected) < 2e3;
      if (!ok) pass = false;
      detail << to_string(config) << " " << b << " mG: ";
      if (centers.size() == 2) {
        detail << "peaks " << centers.front() << " / " << centers.back() << " Hz (expect +-"
               << expected << "); ";
      } else {
        detail << centers.size() << " peaks; ";
      }
    }

    // Separation slope over four fields at low power.
    SweepSpec slope_spec;
    slope_spec.configuration = config;
    slope_spec.points = 4001;
    slope_spec.powers_mW = {1.0};
    slope_spec.b_fields_mG = {5.0, 10.0, 20.0, 30.0};
    const SpectrumTable slope_table = run_sweep(slope_spec, cli::effective_threads());
    std::vector<FieldSpectrum> spectra;
    for (double b : slope_spec.b_fields_mG) {
      const auto idx = slope_table.spectrum_indices(1.0, b);
      spectra.push_back({b, slope_table.deltas_hz(idx), slope_table.transmissions(idx)});
    }
    const double slope = separation_slope(spectra, 1e-4);
    if (std::abs(slope - 5.6e3) > 0.05 * 5.6e3) pass = false;
    detail << to_string(config) << " slope " << slope << " Hz/mG; ";
  }

  report(4, "transparency maxima at +-Delta_Z and 5.6 kHz/mG separation slope", pass, detail.str());
}

// --- criterion 5: merging phenomenology (sigma probe, 30 mG) ----------------

void criterion_5() {
  SweepSpec spec;
  spec.configuration = Configuration::kSigmaProbe;
  spec.points = 2001;
  spec.b_fields_mG = {30.0};
  const SpectrumTable table = run_sweep(spec, cli::effective_threads());
  const double baseline = std::exp(-spec.optical_depth);

  std::vector<double> contrasts;
  int maxima_at_1mw = 0;
  for (double power : kPowers) {
    const auto idx = table.spectrum_indices(power, 30.0);
    const auto xs = table.deltas_hz(idx);
    const auto ts = table.transmissions(idx);
    contrasts.push_back(central_minimum_contrast(xs, ts, baseline));
    if (power == 1.0) {
      for (const auto& f : find_extrema(xs, ts, 1e-3)) {
        maxima_at_1mw += f.kind == FeatureKind::kMaximum;
      }
    }
  }
  const bool resolved = maxima_at_1mw == 2;
  const bool monotone = contrasts[0] > contrasts[1] && contrasts[1] > contrasts[2] &&
                        contrasts[2] > 0.0;
  std::ostringstream detail;
  detail << maxima_at_1mw << " maxima at 1 mW; relative dip contrast " << contrasts[0] << " -> "
         << contrasts[1] << " -> " << contrasts[2];
  report(5, "sigma-probe peaks merge with increasing power at 30 mG", resolved && monotone,
         detail.str());
}

// --- criterion 6: central dip phenomenology (pi probe) -----------------------

void criterion_6() {
  SweepSpec spec;
  spec.configuration = Configuration::kPiProbe;
  spec.points = 4001;
  spec.b_fields_mG = {10.0, 30.0};
  const SpectrumTable table = run_sweep(spec, cli::effective_threads());

  bool pass = true;
  std::ostringstream detail;
  for (double b : spec.b_fields_mG) {
    double previous = 1e18;
    for (double power : kPowers) {
      const auto idx = table.spectrum_indices(power, b);
      const auto xs = table.deltas_hz(idx);
      const auto ts = table.transmissions(idx);
      const std::size_t mid = ts.size() / 2;
      const bool strict_min = ts[mid] < ts[mid - 1] && ts[mid] < ts[mid + 1];

      const SpectralFeature* dip = nullptr;
      for (const auto& f : find_extrema(xs, ts, 1e-4)) {
        if (f.kind == FeatureKind::kMinimum && std::abs(f.center_hz) < 2e3) dip = &f;
      }
      double width = 0.0;
      if (dip != nullptr) width = feature_fwhm(xs, ts, *dip);
      const bool narrower = width < previous;
      const bool in_range = b != 10.0 || (width > 5e3 && width < 100e3);
      if (!strict_min || dip == nullptr || !narrower || !in_range) pass = false;
      previous = width;
      if (b == 10.0) detail << power << " mW: " << width / 1e3 << " kHz; ";
    }
  }
  report(6, "pi-probe central dip persists and narrows with power (10 mG FWHM in 5-100 kHz)", pass,
         detail.str());
}

// --- criterion 7: interference excess ----------------------------------------

void criterion_7() {
  SweepSpec pi_spec;
  pi_spec.configuration = Configuration::kPiProbe;
  pi_spec.points = 2001;
  const SpectrumTable pi_table = run_sweep(pi_spec, cli::effective_threads());

  SweepSpec sigma_spec = pi_spec;
  sigma_spec.configuration = Configuration::kSigmaProbe;
  const SpectrumTable sigma_table = run_sweep(sigma_spec, cli::effective_threads());

  const auto excess_of = [](const SpectrumTable& table, double power, double b) {
    const auto idx = table.spectrum_indices(power, b);
    return incoherent_excess(table.deltas_hz(idx), table.transmissions(idx), 1.0);
  };

  const double pi_22_10 = excess_of(pi_table, 22.0, 10.0);
  const double sigma_22_10 = excess_of(sigma_table, 22.0, 10.0);
  const double pi_22_0 = excess_of(pi_table, 22.0, 0.0);

  const bool pass = pi_22_10 > 0.0 && std::abs(sigma_22_10) < 1e-3 && std::abs(pi_22_0) < 1e-3;
  std::ostringstream detail;
  detail << "pi-probe 22 mW 10 mG: " << pi_22_10 << "; sigma-probe same point: " << sigma_22_10
         << "; pi-probe B=0: " << pi_22_0;
  report(7, "interference dip exceeds any incoherent two-EIT account", pass, detail.str());
}

// --- criterion 8: Morris-Shore reduction -------------------------------------

void criterion_8() {
  const double omega_c = power_to_rabi_scaled(22.0);
  TripodModel model = TripodModel::make(Configuration::kPiProbe, 1e-3 * omega_c, omega_c, 0.0,
                                        0.0, ZeemanField::from_milligauss(0.0),
                                        equivalence_rates());
  const MorrisShoreReduction reduction = morris_shore_reduce(model);

  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double delta_hz = -3e5 + i * 1.5e3;
    model.set_raman_detuning_bar(scale_frequency(delta_hz));
    const std::complex<double> reduced =
        chi_three_level(model.raman_detuning_bar(), reduction.effective.omega_c_bar,
                        reduction.effective.gamma_r_bar, reduction.effective.delta_c_bar, 1.0);
    const std::complex<double> full = chi_analytic(model);
    worst_analytic = std::max(worst_analytic, std::abs(full - reduced) / std::abs(reduced));

    const DensityMatrix rho = solve_steady(build_liouvillian(model));
    solved_states().push_back(rho);
    const std::complex<double> numeric = probe_susceptibility(rho, model);
    worst_numeric =
        std::max(worst_numeric, std::abs(numeric.imag() - reduced.imag()) / std::abs(reduced.imag()));
  }

  std::ostringstream detail;
  detail << "analytic max rel diff " << worst_analytic << "; numeric max rel Im diff "
         << worst_numeric;
  report(8, "degenerate pi-probe tripod matches the reduced three-level spectrum",
         worst_analytic < 1e-8 && worst_numeric < 1e-3, detail.str());
}

// --- criterion 9: density-matrix invariants ----------------------------------

void criterion_9() {
  // Extend the collection with the full paper grid at physical rates.
  for (Configuration config : {Configuration::kSigmaProbe, Configuration::kPiProbe}) {
    for (double power : kPowers) {
      for (double b : kFields) {
        for (double delta_hz : {-9e4, 0.0, 2.8e4, 3e5}) {
          const double omega_c = power_to_rabi_scaled(power);
          const TripodModel model =
              TripodModel::make(config, 1e-2 * omega_c, omega_c, scale_frequency(delta_hz), 0.0,
                                ZeemanField::from_milligauss(b));
          solved_states().push_back(solve_steady(build_liouvillian(model)));
        }
      }
    }
  }

  double worst_herm = 0.0, worst_trace = 0.0, worst_eig = 0.0;
  for (const DensityMatrix& rho : solved_states()) {
    worst_herm = std::max(worst_herm, rho.hermiticity_error());
    worst_trace = std::max(worst_trace, rho.trace_error());
    worst_eig = std::min(worst_eig, rho.min_eigenvalue());
  }
  const bool pass = worst_herm < 1e-12 && worst_trace < 1e-10 && worst_eig > -1e-8;
  std::ostringstream detail;
  detail << solved_states().size() << " states: hermiticity " << worst_herm << ", |trace-1| "
         << worst_trace << ", min eigenvalue " << worst_eig;
  report(9, "density-matrix invariants on every solved steady state", pass, detail.str());
}

// --- criterion 10: CLI determinism -------------------------------------------

void criterion_10() {
  const fs::path base = fs::temp_directory_path() / "tripod_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string config = std::string(TRIPOD_CONFIG_DIR) + "/figure5.cfg";

  cli::Overrides first, second;
  first.output_dir = (base / "run1").string();
  second.output_dir = (base / "run2").string();
  first.quiet = second.quiet = true;

  const int status1 = cli::run(config, first);
  const int status2 = cli::run(config, second);

  bool identical = status1 == 0 && status2 == 0;
  int files = 0;
  if (identical) {
    for (const auto& entry : fs::directory_iterator(base / "run1")) {
      const fs::path other = base / "run2" / entry.path().filename();
      std::ifstream a(entry.path(), std::ios::binary), b(other, std::ios::binary);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      if (!fs::exists(other) || sa.str() != sb.str()) {
        identical = false;
        break;
      }
      ++files;
    }
  }
  std::ostringstream detail;
  detail << "exit codes " << status1 << "/" << status2 << ", " << files
         << " files byte-compared";
  report(10, "two CLI runs of the bundled pi-probe sweep are byte-identical", identical,
         detail.str());
}

}  // namespace

int main() {
  std::printf("tripod acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
