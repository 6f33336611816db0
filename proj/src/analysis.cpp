#include "tripod/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tripod/units.hpp"

namespace tripod {

namespace {

double parabolic_center(double x0, double xp, double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  if (denom == 0.0) return x0;
  const double shift = 0.5 * (ym - yp) / denom;
  // Clamp to the central cell; a refined extremum cannot leave it.
  return x0 + std::clamp(shift, -1.0, 1.0) * (xp - x0);
}

// Topographic prominence of a local maximum of ys (pass negated ys for minima):
// height above the higher of the two valley floors on the paths toward
// strictly higher ground (or the grid ends).
double prominence_of_max(std::span<const double> ys, std::size_t i) {
  double left_floor = ys[i];
  for (std::size_t j = i; j-- > 0;) {
    left_floor = std::min(left_floor, ys[j]);
    if (ys[j] > ys[i]) break;
  }
  double right_floor = ys[i];
  for (std::size_t j = i + 1; j < ys.size(); ++j) {
    right_floor = std::min(right_floor, ys[j]);
    if (ys[j] > ys[i]) break;
  }
  return ys[i] - std::max(left_floor, right_floor);
}

}  // namespace

std::vector<SpectralFeature> find_extrema(std::span<const double> xs, std::span<const double> ys,
                                          double min_prominence) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("find_extrema: xs and ys must have equal length");
  }
  if (xs.size() < 3) {
    throw std::invalid_argument("find_extrema: need at least 3 points");
  }
  if (!(min_prominence > 0.0)) {
    throw std::invalid_argument("find_extrema: min_prominence must be positive");
  }

  std::vector<double> negated(ys.size());
  std::transform(ys.begin(), ys.end(), negated.begin(), [](double y) { return -y; });

  std::vector<SpectralFeature> features;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    const bool is_max = ys[i] > ys[i - 1] && ys[i] > ys[i + 1];
    const bool is_min = ys[i] < ys[i - 1] && ys[i] < ys[i + 1];
    if (!is_max && !is_min) continue;
    const double prom = is_max ? prominence_of_max(ys, i)
                               : prominence_of_max(std::span<const double>(negated), i);
    if (prom < min_prominence) continue;
    const double center = parabolic_center(xs[i], xs[i + 1], ys[i - 1], ys[i], ys[i + 1]);
    features.push_back({is_max ? FeatureKind::kMaximum : FeatureKind::kMinimum, center, ys[i],
                        prom, i});
  }

  std::stable_sort(features.begin(), features.end(),
                   [](const SpectralFeature& a, const SpectralFeature& b) {
                     if (a.prominence != b.prominence) return a.prominence > b.prominence;
                     return a.center_hz < b.center_hz;
                   });
  return features;
}

double feature_fwhm(std::span<const double> xs, std::span<const double> ys,
                    const SpectralFeature& feature) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw std::invalid_argument("feature_fwhm: invalid spectrum");
  }
  const std::size_t i = feature.index;
  const double sign = feature.kind == FeatureKind::kMaximum ? 1.0 : -1.0;
  const double level = sign * feature.height - 0.5 * feature.prominence;

  const auto out_of_range = [&] {
    std::ostringstream msg;
    msg << "feature_fwhm: half-prominence crossing outside the grid for the feature at "
        << feature.center_hz << " Hz; rerun with a wider sweep";
    return std::runtime_error(msg.str());
  };

  // Walk outward to the first crossing below `level` on each side.
  double left = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = i; j-- > 0;) {
    if (sign * ys[j] <= level) {
      const double y1 = sign * ys[j];
      const double y2 = sign * ys[j + 1];
      left = xs[j] + (level - y1) / (y2 - y1) * (xs[j + 1] - xs[j]);
      break;
    }
  }
  if (std::isnan(left)) throw out_of_range();

  double right = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = i + 1; j < ys.size(); ++j) {
    if (sign * ys[j] <= level) {
      const double y1 = sign * ys[j - 1];
      const double y2 = sign * ys[j];
      right = xs[j - 1] + (y1 - level) / (y1 - y2) * (xs[j] - xs[j - 1]);
      break;
    }
  }
  if (std::isnan(right)) throw out_of_range();
  return right - left;
}

std::string to_string(FitModelKind kind) {
  switch (kind) {
    case FitModelKind::kSingleEit: return "single-eit";
    case FitModelKind::kDoubleLorentzian: return "double-lorentzian";
    case FitModelKind::kInteractingDoubleDark: return "interacting-double-dark";
    case FitModelKind::kIncoherentTwoEit: return "incoherent-two-eit";
  }
  return "unknown";
}

namespace {

double lorentzian(double x, double center, double width) {
  const double w2 = width * width;
  const double d = x - center;
  return w2 / (d * d + w2);
}

std::size_t parameter_count(FitModelKind kind) {
  switch (kind) {
    case FitModelKind::kSingleEit: return 4;
    case FitModelKind::kDoubleLorentzian: return 4;
    case FitModelKind::kInteractingDoubleDark: return 4;
    case FitModelKind::kIncoherentTwoEit: return 7;
  }
  return 0;
}

}  // namespace

double evaluate_fit_model(FitModelKind kind, std::span<const double> p, double x) {
  switch (kind) {
    case FitModelKind::kSingleEit:
      return p[0] - p[1] * lorentzian(x, p[2], p[3]);
    case FitModelKind::kDoubleLorentzian:
      return p[0] - p[1] * (lorentzian(x, p[2], p[3]) + lorentzian(x, -p[2], p[3]));
    case FitModelKind::kInteractingDoubleDark: {
      // Parameters in barred units, x in Hz.
      const double delta = scale_frequency(x);
      const double gr = p[2];
      const double dz = p[3];
      const double omega_sq = p[1] * p[1];
      const double am = delta - dz;
      const double ap = delta + dz;
      const double xq = 2.0 * gr + 1.5 * omega_sq;
      const double y = delta * delta + dz * dz;
      const double a2 = am * am * ap * ap;
      const double num = 2.0 * a2 + gr * y * (2.0 * gr + xq) + gr * gr * gr * xq;
      const double den =
          4.0 * a2 + 4.0 * gr * xq * y + xq * xq * gr * gr + 2.25 * delta * delta * omega_sq * omega_sq;
      return den == 0.0 ? 0.0 : 3.0 * p[0] * num / den;
    }
    case FitModelKind::kIncoherentTwoEit:
      // Transparency-only components (depths enter as absolute values): a
      // signed depth would let a component mimic the interference absorption
      // spike, defeating the incoherent-sum comparison.
      return std::exp(-(p[0] - std::abs(p[1]) * lorentzian(x, p[2], p[3]) -
                        std::abs(p[4]) * lorentzian(x, p[5], p[6])));
  }
  return 0.0;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd residuals(FitModelKind kind, const VectorXd& params, std::span<const double> xs,
                   std::span<const double> ys) {
  VectorXd r(xs.size());
  const std::span<const double> p(params.data(), static_cast<std::size_t>(params.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) = evaluate_fit_model(kind, p, xs[i]) - ys[i];
  }
  return r;
}

MatrixXd jacobian(FitModelKind kind, const VectorXd& params, std::span<const double> xs,
                  std::span<const double> ys) {
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  const Eigen::Index k = params.size();
  MatrixXd jac(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double scale = std::max(std::abs(params(j)), 1e-30);
    const double h = 1e-6 * scale;
    VectorXd plus = params, minus = params;
    plus(j) += h;
    minus(j) -= h;
    jac.col(j) = (residuals(kind, plus, xs, ys) - residuals(kind, minus, xs, ys)) / (2.0 * h);
  }
  return jac;
}

FitResult levenberg_marquardt(FitModelKind kind, VectorXd params, std::span<const double> xs,
                              std::span<const double> ys, const FitOptions& options) {
  FitResult result;
  result.model_kind = kind;

  VectorXd r = residuals(kind, params, xs, ys);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  int small_improvements = 0;

  for (; iter < options.max_iterations; ++iter) {
    const MatrixXd jac = jacobian(kind, params, xs, ys);
    const MatrixXd jtj = jac.transpose() * jac;
    const VectorXd g = jac.transpose() * r;

    if (g.cwiseAbs().maxCoeff() < options.gradient_tol) {
      converged = true;
      break;
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
      const VectorXd step = damped.ldlt().solve(-g);
      const VectorXd trial = params + step;
      const VectorXd r_trial = residuals(kind, trial, xs, ys);
      const double cost_trial = r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial <= cost) {
        const double rel_step =
            (step.cwiseAbs().array() / params.cwiseAbs().array().max(1e-30)).maxCoeff();
        const double improvement = cost - cost_trial;
        params = trial;
        r = r_trial;
        cost = cost_trial;
        lambda = std::max(lambda * 0.3, 1e-14);
        stepped = true;
        if (rel_step < options.step_tol) converged = true;
        // At a nonzero-residual minimum the cost stalls while the gradient
        // criterion stays out of reach; two consecutive negligible
        // improvements terminate.
        if (improvement <= options.cost_tol * std::max(cost, 1e-300)) {
          if (++small_improvements >= 2) converged = true;
        } else {
          small_improvements = 0;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;  // damping exhausted; best-so-far parameters stand
    if (converged) break;
  }

  result.parameters.assign(params.data(), params.data() + params.size());
  result.residual_rms = std::sqrt(cost / static_cast<double>(xs.size()));
  result.converged = converged;
  result.iterations = iter;

  // Per-parameter uncertainties from the normal equations at the solution.
  const MatrixXd jac = jacobian(kind, params, xs, ys);
  const MatrixXd jtj = jac.transpose() * jac;
  const Eigen::Index dof = static_cast<Eigen::Index>(xs.size()) - params.size();
  const double variance = dof > 0 ? cost / static_cast<double>(dof) : 0.0;
  const MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse() * variance;
  result.uncertainties.resize(static_cast<std::size_t>(params.size()));
  for (Eigen::Index j = 0; j < params.size(); ++j) {
    result.uncertainties[static_cast<std::size_t>(j)] = std::sqrt(std::max(cov(j, j), 0.0));
  }
  return result;
}

// Deterministic starting points seeded from the extrema of the data.
std::vector<VectorXd> default_seeds(FitModelKind kind, std::span<const double> xs,
                                    std::span<const double> ys) {
  const double y_max = *std::max_element(ys.begin(), ys.end());
  const double y_min = *std::min_element(ys.begin(), ys.end());
  const double span_x = xs.back() - xs.front();
  const double contrast = std::max(y_max - y_min, 1e-12);
  const double prominence = std::max(1e-6 * contrast, 1e-12);

  std::vector<SpectralFeature> features;  // all kinds, prominence-sorted
  std::vector<SpectralFeature> maxima;
  try {
    features = find_extrema(xs, ys, prominence);
    for (const SpectralFeature& f : features) {
      if (f.kind == FeatureKind::kMaximum) maxima.push_back(f);
    }
  } catch (const std::invalid_argument&) {
  }

  std::vector<VectorXd> seeds;
  const auto vec = [](std::initializer_list<double> vals) {
    VectorXd v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double x : vals) v(i++) = x;
    return v;
  };

  switch (kind) {
    case FitModelKind::kSingleEit: {
      // The model subtracts a Lorentzian: a data minimum means positive depth,
      // a data maximum negative depth.
      double center = 0.0, width = span_x / 8.0, depth = contrast;
      if (!features.empty()) {
        const SpectralFeature& top = features.front();
        center = top.center_hz;
        depth = top.kind == FeatureKind::kMinimum ? top.prominence : -top.prominence;
        try {
          width = 0.5 * feature_fwhm(xs, ys, top);
        } catch (const std::runtime_error&) {
        }
      }
      seeds.push_back(vec({y_max, depth, center, width}));
      seeds.push_back(vec({y_min, -depth, center, width}));
      break;
    }
    case FitModelKind::kDoubleLorentzian: {
      double center = span_x / 8.0, width = span_x / 16.0, depth = contrast;
      double base = y_max;
      if (!features.empty()) {
        const FeatureKind lead = features.front().kind;
        std::vector<const SpectralFeature*> same_kind;
        for (const SpectralFeature& f : features) {
          if (f.kind == lead) same_kind.push_back(&f);
        }
        depth = lead == FeatureKind::kMinimum ? features.front().prominence
                                              : -features.front().prominence;
        base = lead == FeatureKind::kMinimum ? y_max : y_min;
        if (same_kind.size() >= 2) {
          center = 0.5 * (std::abs(same_kind[0]->center_hz) + std::abs(same_kind[1]->center_hz));
        } else {
          center = std::max(std::abs(same_kind[0]->center_hz), span_x / 32.0);
        }
        try {
          width = 0.5 * feature_fwhm(xs, ys, features.front());
        } catch (const std::runtime_error&) {
        }
      }
      seeds.push_back(vec({base, depth, center, width}));
      seeds.push_back(vec({base, depth, center / 2.0, width / 2.0}));
      break;
    }
    case FitModelKind::kInteractingDoubleDark: {
      // amplitude from the far-wing absorption level: y -> 3A/2.
      const double amplitude = std::max(y_max, 1e-12) / 1.5;
      double dz_bar = scale_frequency(span_x / 8.0);
      if (maxima.size() >= 2) {
        dz_bar = scale_frequency(
            0.5 * (std::abs(maxima[0].center_hz) + std::abs(maxima[1].center_hz)));
      }
      const double gr_bar = 1.5915494309189534e-6;
      seeds.push_back(vec({amplitude, 5e-3, gr_bar, dz_bar}));
      seeds.push_back(vec({amplitude, 2e-3, gr_bar, dz_bar}));
      break;
    }
    case FitModelKind::kIncoherentTwoEit: {
      const double beta = std::max(-std::log(std::max(y_min, 1e-12)), 1e-3);
      const double depth = std::max(-std::log(std::max(y_min, 1e-12)) +
                                        std::log(std::max(y_max, 1e-12)),
                                    1e-3);
      if (maxima.size() >= 2) {
        const SpectralFeature& left = *std::min_element(
            maxima.begin(), maxima.end(),
            [](const auto& a, const auto& b) { return a.center_hz < b.center_hz; });
        const SpectralFeature& right = *std::max_element(
            maxima.begin(), maxima.end(),
            [](const auto& a, const auto& b) { return a.center_hz < b.center_hz; });
        double w1 = span_x / 32.0, w2 = span_x / 32.0;
        try {
          w1 = 0.5 * feature_fwhm(xs, ys, left);
          w2 = 0.5 * feature_fwhm(xs, ys, right);
        } catch (const std::runtime_error&) {
        }
        seeds.push_back(
            vec({beta, depth, left.center_hz, w1, depth, right.center_hz, w2}));
      }
      if (!maxima.empty()) {
        const SpectralFeature& top = maxima.front();
        double w = span_x / 32.0;
        try {
          w = 0.5 * feature_fwhm(xs, ys, top);
        } catch (const std::runtime_error&) {
        }
        // Split seeds around a single (possibly merged) peak.
        seeds.push_back(vec({beta, depth, top.center_hz - w / 2.0, w, depth,
                             top.center_hz + w / 2.0, w}));
        seeds.push_back(vec({beta, depth, top.center_hz - w / 8.0, w / 2.0, depth,
                             top.center_hz + w / 8.0, w / 2.0}));
      } else {
        seeds.push_back(vec({beta, depth, -span_x / 8.0, span_x / 16.0, depth, span_x / 8.0,
                             span_x / 16.0}));
      }
      break;
    }
  }
  return seeds;
}

// The models are invariant under sign flips of widths (squared) and, for the
// mirrored pair, of the center; report the non-negative representative and
// order the two-component model by center.
void canonicalize(FitResult& fit) {
  std::vector<double>& p = fit.parameters;
  switch (fit.model_kind) {
    case FitModelKind::kSingleEit:
      p[3] = std::abs(p[3]);
      break;
    case FitModelKind::kDoubleLorentzian:
      p[2] = std::abs(p[2]);
      p[3] = std::abs(p[3]);
      break;
    case FitModelKind::kInteractingDoubleDark:
      p[1] = std::abs(p[1]);
      p[3] = std::abs(p[3]);
      break;
    case FitModelKind::kIncoherentTwoEit:
      p[1] = std::abs(p[1]);
      p[3] = std::abs(p[3]);
      p[4] = std::abs(p[4]);
      p[6] = std::abs(p[6]);
      if (p[2] > p[5]) {
        std::swap(p[1], p[4]);
        std::swap(p[2], p[5]);
        std::swap(p[3], p[6]);
        std::swap(fit.uncertainties[1], fit.uncertainties[4]);
        std::swap(fit.uncertainties[2], fit.uncertainties[5]);
        std::swap(fit.uncertainties[3], fit.uncertainties[6]);
      }
      break;
  }
}

}  // namespace

FitResult fit_model(std::span<const double> xs, std::span<const double> ys, FitModelKind kind,
                    const FitOptions& options) {
  const std::size_t k = parameter_count(kind);
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("fit_model: xs and ys must have equal length");
  }
  if (xs.size() < 5 * k) {
    throw std::invalid_argument("fit_model: need at least 5 points per parameter");
  }

  std::vector<VectorXd> seeds;
  if (!options.initial_guess.empty()) {
    if (options.initial_guess.size() != k) {
      throw std::invalid_argument("fit_model: initial guess has the wrong parameter count");
    }
    seeds.emplace_back(
        Eigen::Map<const VectorXd>(options.initial_guess.data(), static_cast<Eigen::Index>(k)));
  } else {
    seeds = default_seeds(kind, xs, ys);
  }

  FitResult best;
  bool have_best = false;
  for (const VectorXd& seed : seeds) {
    FitResult candidate = levenberg_marquardt(kind, seed, xs, ys, options);
    if (!have_best || candidate.residual_rms < best.residual_rms) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  canonicalize(best);
  return best;
}

namespace {

// Dip sample: transmission minimum between the two outermost maxima, or the
// global minimum when the peaks have merged.
std::size_t dip_index(std::span<const double> xs, std::span<const double> ys) {
  const double y_max = *std::max_element(ys.begin(), ys.end());
  const double y_min = *std::min_element(ys.begin(), ys.end());
  const double prominence = std::max(1e-6 * (y_max - y_min), 1e-15);
  const std::vector<SpectralFeature> features = find_extrema(xs, ys, prominence);
  std::size_t lo = 0, hi = ys.size() - 1;
  std::size_t n_max = 0;
  std::size_t leftmost = ys.size(), rightmost = 0;
  for (const SpectralFeature& f : features) {
    if (f.kind != FeatureKind::kMaximum) continue;
    ++n_max;
    leftmost = std::min(leftmost, f.index);
    rightmost = std::max(rightmost, f.index);
  }
  if (n_max >= 2) {
    lo = leftmost;
    hi = rightmost;
  }
  std::size_t best = lo;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (ys[i] < ys[best]) best = i;
  }
  return best;
}

}  // namespace

double incoherent_excess(std::span<const double> xs, std::span<const double> transmission,
                         double optical_depth) {
  if (!(optical_depth > 0.0)) {
    throw std::invalid_argument("incoherent_excess: optical_depth must be positive");
  }
  const FitResult fit = fit_model(xs, transmission, FitModelKind::kIncoherentTwoEit);
  if (!fit.converged) {
    std::ostringstream msg;
    msg << "incoherent_excess: incoherent-two-eit fit did not converge (rms "
        << fit.residual_rms << " after " << fit.iterations << " iterations)";
    throw std::runtime_error(msg.str());
  }
  const std::size_t dip = dip_index(xs, transmission);
  const double model_at_dip = evaluate_fit_model(FitModelKind::kIncoherentTwoEit, fit.parameters,
                                                 xs[dip]);
  const double bare_contrast = 1.0 - std::exp(-optical_depth);
  return (model_at_dip - transmission[dip]) / bare_contrast;
}

double central_minimum_contrast(std::span<const double> xs, std::span<const double> ys,
                                double baseline, double min_prominence) {
  const std::vector<SpectralFeature> features = find_extrema(xs, ys, min_prominence);
  const SpectralFeature* left = nullptr;
  const SpectralFeature* right = nullptr;
  for (const SpectralFeature& f : features) {
    if (f.kind != FeatureKind::kMaximum) continue;
    if (!left || f.center_hz < left->center_hz) left = &f;
    if (!right || f.center_hz > right->center_hz) right = &f;
  }
  if (!left || !right || left == right) return 0.0;

  double t_min = ys[left->index];
  for (std::size_t i = left->index; i <= right->index; ++i) t_min = std::min(t_min, ys[i]);
  const double peaks = 0.5 * (left->height + right->height);
  if (peaks <= baseline) return 0.0;
  return (peaks - t_min) / (peaks - baseline);
}

double separation_slope(const std::vector<FieldSpectrum>& spectra, double min_prominence) {
  std::vector<double> fields;
  std::vector<double> separations;
  for (const FieldSpectrum& s : spectra) {
    const std::vector<SpectralFeature> features =
        find_extrema(s.xs_hz, s.ys, min_prominence);
    const SpectralFeature* left = nullptr;
    const SpectralFeature* right = nullptr;
    for (const SpectralFeature& f : features) {
      if (f.kind != FeatureKind::kMaximum) continue;
      if (!left || f.center_hz < left->center_hz) left = &f;
      if (!right || f.center_hz > right->center_hz) right = &f;
    }
    if (!left || !right || left == right) continue;  // unresolved double peak
    fields.push_back(s.b_mG);
    separations.push_back(right->center_hz - left->center_hz);
  }
  if (fields.size() < 2) {
    throw std::invalid_argument(
        "separation_slope: need at least 2 fields with resolved double peaks");
  }

  Eigen::MatrixXd design(fields.size(), 2);
  Eigen::VectorXd rhs(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = fields[i];
    design(static_cast<Eigen::Index>(i), 1) = 1.0;
    rhs(static_cast<Eigen::Index>(i)) = separations[i];
  }
  const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(rhs);
  return coeffs(0);
}

}  // namespace tripod
