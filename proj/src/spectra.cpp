#include "tripod/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tripod/analytic.hpp"
#include "tripod/steady_state.hpp"

namespace tripod {

std::string to_string(Backend backend) {
  return backend == Backend::kAnalytic ? "analytic" : "numeric";
}

Backend backend_from_string(const std::string& name) {
  if (name == "analytic") return Backend::kAnalytic;
  if (name == "numeric") return Backend::kNumeric;
  throw std::invalid_argument("unknown model '" + name + "' (expected analytic or numeric)");
}

void SweepSpec::validate() const {
  if (!(delta_min_hz < delta_max_hz)) {
    throw std::invalid_argument("SweepSpec: delta_min_hz must be below delta_max_hz");
  }
  if (points < 3) {
    throw std::invalid_argument("SweepSpec: points must be at least 3");
  }
  if (powers_mW.empty()) {
    throw std::invalid_argument("SweepSpec: powers_mW must be non-empty");
  }
  if (b_fields_mG.empty()) {
    throw std::invalid_argument("SweepSpec: b_fields_mG must be non-empty");
  }
  for (double p : powers_mW) {
    if (!(p >= 0.0)) throw std::invalid_argument("SweepSpec: powers must be non-negative");
  }
  if (!(optical_depth >= 0.0)) {
    throw std::invalid_argument("SweepSpec: optical_depth must be non-negative");
  }
  if (!(probe_ratio > 0.0)) {
    throw std::invalid_argument("SweepSpec: probe_ratio must be positive");
  }
  rates.validate();
}

std::vector<std::size_t> SpectrumTable::spectrum_indices(double power_mW, double b_mG) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].power_mW == power_mW && rows[i].b_mG == b_mG) idx.push_back(i);
  }
  return idx;
}

std::vector<double> SpectrumTable::deltas_hz(const std::vector<std::size_t>& idx) const {
  std::vector<double> out(idx.size());
  std::transform(idx.begin(), idx.end(), out.begin(), [&](std::size_t i) { return rows[i].delta_hz; });
  return out;
}

std::vector<double> SpectrumTable::transmissions(const std::vector<std::size_t>& idx) const {
  std::vector<double> out(idx.size());
  std::transform(idx.begin(), idx.end(), out.begin(),
                 [&](std::size_t i) { return rows[i].transmission; });
  return out;
}

std::vector<double> SpectrumTable::im_chis(const std::vector<std::size_t>& idx) const {
  std::vector<double> out(idx.size());
  std::transform(idx.begin(), idx.end(), out.begin(), [&](std::size_t i) { return rows[i].im_chi; });
  return out;
}

double transmission(double im_chi_normalized, double optical_depth) {
  if (!(optical_depth >= 0.0)) {
    throw std::invalid_argument("transmission: optical_depth must be non-negative");
  }
  return std::exp(-optical_depth * im_chi_normalized);
}

namespace {

struct GridPoint {
  std::size_t row;
  double power_mW;
  double b_mG;
  double delta_hz;
};

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const int n_threads = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

SpectrumTable run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();

  std::vector<double> deltas(spec.points);
  const double step = (spec.delta_max_hz - spec.delta_min_hz) / (spec.points - 1);
  for (int i = 0; i < spec.points; ++i) deltas[i] = spec.delta_min_hz + step * i;

  std::vector<GridPoint> grid;
  grid.reserve(spec.powers_mW.size() * spec.b_fields_mG.size() * deltas.size());
  std::size_t row = 0;
  for (double power : spec.powers_mW) {
    for (double b : spec.b_fields_mG) {
      for (double delta : deltas) grid.push_back({row++, power, b, delta});
    }
  }

  SpectrumTable table;
  table.rows.resize(grid.size());
  const double bare = bare_absorption_peak(spec.configuration);

  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const GridPoint& point = grid[i];
    const double omega_c = power_to_rabi_scaled(point.power_mW);
    const double delta_bar = scale_frequency(point.delta_hz);
    std::complex<double> chi;
    try {
      if (spec.model == Backend::kAnalytic) {
        TripodModel model = TripodModel::make(
            spec.configuration, 0.0, omega_c, delta_bar, spec.coupling_detuning_bar,
            ZeemanField::from_milligauss(point.b_mG), spec.rates);
        chi = chi_analytic(model);
      } else {
        TripodModel model = TripodModel::make(
            spec.configuration, spec.probe_ratio * omega_c, omega_c, delta_bar,
            spec.coupling_detuning_bar, ZeemanField::from_milligauss(point.b_mG), spec.rates);
        if (omega_c == 0.0) {
          // No coupling power: fall back to a fixed small probe so the
          // bare-absorption row is still defined.
          model.probe.rabi_bar = 1e-6;
        }
        const DensityMatrix rho = solve_steady(build_liouvillian(model));
        chi = probe_susceptibility(rho, model);
      }
    } catch (const std::exception& err) {
      std::ostringstream msg;
      msg << "run_sweep failed at configuration=" << to_string(spec.configuration)
          << " power_mW=" << point.power_mW << " B_mG=" << point.b_mG
          << " delta_hz=" << point.delta_hz << ": " << err.what();
      throw std::runtime_error(msg.str());
    }
    const double re = chi.real() / bare;
    const double im = chi.imag() / bare;
    table.rows[point.row] = {spec.configuration, point.power_mW, point.b_mG,
                             point.delta_hz,     re,             im,
                             transmission(im, spec.optical_depth)};
  });

  return table;
}

}  // namespace tripod
