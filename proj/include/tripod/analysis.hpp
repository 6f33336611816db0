#ifndef TRIPOD_ANALYSIS_HPP
#define TRIPOD_ANALYSIS_HPP

#include <span>
#include <string>
#include <vector>

namespace tripod {

enum class FeatureKind { kMaximum, kMinimum };

struct SpectralFeature {
  FeatureKind kind;
  double center_hz;    // 3-point parabolic refinement around the grid extremum
  double height;       // y at the grid extremum
  double prominence;   // topographic prominence (> 0)
  std::size_t index;   // grid index of the extremum
};

// Strict local extrema of ys over the uniform grid xs, filtered by prominence.
// Sorted by prominence (descending), ties by leftmost center.
// Throws std::invalid_argument for fewer than 3 points or min_prominence <= 0.
std::vector<SpectralFeature> find_extrema(std::span<const double> xs, std::span<const double> ys,
                                          double min_prominence);

// Full width at half prominence via linear interpolation of the two crossing
// points around the feature. Throws std::runtime_error (suggesting a wider
// sweep) when a crossing lies outside the grid.
double feature_fwhm(std::span<const double> xs, std::span<const double> ys,
                    const SpectralFeature& feature);

// Parametric lineshape models, y(x; p):
//   kSingleEit:            p = (base, depth, center_hz, width_hz)
//                          base - depth * w^2 / ((x-c)^2 + w^2)
//   kDoubleLorentzian:     p = (base, depth, center_hz, width_hz)
//                          base - depth * [L(x-c) + L(x+c)], mirrored transparency pair
//   kInteractingDoubleDark: p = (amplitude, omega_c_bar, gamma_r_bar, delta_z_bar)
//                          the pi-probe rational absorption form on the Hz grid
//   kIncoherentTwoEit:     p = (beta, d1, c1_hz, w1_hz, d2, c2_hz, w2_hz)
//                          exp(-(beta - |d1| L1 - |d2| L2)), transmission of
//                          two independent EIT absorption profiles; depths
//                          enter as absolute values (transparency-only)
enum class FitModelKind { kSingleEit, kDoubleLorentzian, kInteractingDoubleDark, kIncoherentTwoEit };

std::string to_string(FitModelKind kind);

double evaluate_fit_model(FitModelKind kind, std::span<const double> params, double x);

struct FitResult {
  FitModelKind model_kind;
  std::vector<double> parameters;
  std::vector<double> uncertainties;  // from the damped normal equations at the solution
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct FitOptions {
  int max_iterations = 400;
  double gradient_tol = 1e-13;  // convergence: inf-norm of J^T r
  double step_tol = 1e-14;      // convergence: relative step size
  double cost_tol = 1e-12;      // convergence: relative cost improvement,
                                // two consecutive accepted steps
  // Empty: deterministic seeding from find_extrema. Otherwise used as the
  // single starting point.
  std::vector<double> initial_guess;
};

// Damped least squares (Levenberg-Marquardt) with central-difference
// Jacobians. Deterministic; never throws on non-convergence (converged flag).
FitResult fit_model(std::span<const double> xs, std::span<const double> ys, FitModelKind kind,
                    const FitOptions& options = {});

// Central claim metric: fits the best incoherent sum of two independent EIT
// transmission profiles, then reports how far the actual dip undercuts it:
//   (model transmission at the dip - actual transmission at the dip) / (1 - exp(-optical_depth))
// The dip is the transmission minimum between the two outermost maxima (whole
// grid when fewer than two maxima exist). Positive excess certifies
// interference beyond any incoherent account; an incoherent spectrum gives ~0.
// Throws std::runtime_error (with fit diagnostics) on non-convergence.
double incoherent_excess(std::span<const double> xs, std::span<const double> transmission,
                         double optical_depth);

// Relative contrast of the central minimum between the two outermost
// transmission maxima: (T_peaks - T_min) / (T_peaks - baseline).
// Returns 0 when fewer than two maxima exist (merged peak).
double central_minimum_contrast(std::span<const double> xs, std::span<const double> ys,
                                double baseline, double min_prominence = 1e-6);

struct FieldSpectrum {
  double b_mG;
  std::vector<double> xs_hz;
  std::vector<double> ys;  // transmission (or any lineshape with two resolved maxima)
};

// Least-squares slope (Hz per mG) of the double-peak separation versus B.
// Requires >= 2 spectra with two resolved maxima each; throws
// std::invalid_argument otherwise.
double separation_slope(const std::vector<FieldSpectrum>& spectra, double min_prominence = 1e-6);

}  // namespace tripod

#endif
