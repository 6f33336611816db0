#ifndef TRIPOD_STEADY_STATE_HPP
#define TRIPOD_STEADY_STATE_HPP

#include <complex>
#include <cstdint>

#include "tripod/liouvillian.hpp"

namespace tripod {

// Steady state of L via replacing one row with the trace constraint and
// solving the dense 16x16 system (partial-pivot LU plus iterative
// refinement). Checks that the kernel of L is one-dimensional and that the
// residual satisfies ||L vec(rho)||_inf < 1e-12 ||L||_inf.
// Throws std::runtime_error on a degenerate steady state (kernel dimension
// != 1, e.g. gammaT = 0 with vanishing drives) or an out-of-tolerance residual.
DensityMatrix solve_steady(const LiouvillianMatrix& liouvillian);

struct EvolveOptions {
  double step_safety = 0.1;        // step h = step_safety / ||L||_inf
  int chunk_log2 = 20;             // propagator applied in chunks of 2^chunk_log2 steps
  std::int64_t max_chunks = 500000;
  // After the residual first drops below tol, integration continues to
  // max(settle_factor * crossing, crossing + min_settle_chunks) chunks so the
  // slowest transients decay well past the residual criterion.
  std::int64_t settle_factor = 64;
  std::int64_t min_settle_chunks = 1024;
};

// Independent oracle for solve_steady: fixed-step explicit RK4 integration of
// d vec(rho)/dt = L vec(rho) until ||d rho/dt||_inf < tol (plus settling; see
// EvolveOptions). The one-step update is linear, so chunks of steps are
// applied as a precomputed propagator power; the trace is renormalized after
// each chunk. Throws std::runtime_error with the final residual if the
// tolerance is not reached within max_chunks.
DensityMatrix evolve_to_steady(const LiouvillianMatrix& liouvillian, const DensityMatrix& rho0,
                               double tol, const EvolveOptions& options = {});

// Complex probe susceptibility from a solved steady state, in the analytic
// module's normalization (amplitude 1): each probe coherence is divided by
// the population difference of its own transition taken from the same steady
// state, so the coupling-free limit reproduces the analytic bare-absorption
// value exactly.
//   kSigmaProbe: chi = (rho_eg-/w- + rho_eg+/w+) / Omega_P_bar
//   kPiProbe:    chi = rho_eg0 / (w0 * Omega_P_bar)
// Throws std::domain_error when Omega_P_bar = 0 (use the analytic
// susceptibility for the probe-free limit).
std::complex<double> probe_susceptibility(const DensityMatrix& steady_state,
                                          const TripodModel& model);

}  // namespace tripod

#endif
