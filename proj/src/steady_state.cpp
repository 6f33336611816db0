#include "tripod/steady_state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tripod {

namespace {

Vector16cd trace_row() {
  Vector16cd row = Vector16cd::Zero();
  for (int i = 0; i < 4; ++i) row(5 * i) = 1.0;
  return row;
}

DensityMatrix hermitized(const Vector16cd& v) {
  DensityMatrix rho;
  const Matrix4cd m = unvectorize(v);
  rho.matrix = 0.5 * (m + m.adjoint());
  return rho;
}

}  // namespace

DensityMatrix solve_steady(const LiouvillianMatrix& liouvillian) {
  const Matrix16cd& l = liouvillian.matrix;
  const double l_norm = liouvillian.inf_norm();
  if (!(l_norm > 0.0)) {
    throw std::runtime_error("solve_steady: degenerate steady state (zero Liouvillian)");
  }

  // Trace preservation caps the rank at 15; a unique steady state needs exactly 15.
  const Eigen::ColPivHouseholderQR<Matrix16cd> rank_check(l);
  if (rank_check.rank() != 15) {
    std::ostringstream msg;
    msg << "solve_steady: degenerate steady state (Liouvillian rank " << rank_check.rank()
        << ", kernel dimension " << 16 - rank_check.rank() << ")";
    throw std::runtime_error(msg.str());
  }

  // Replace the rho_ee row with the trace constraint and solve.
  Matrix16cd a = l;
  a.row(0) = trace_row().transpose();
  Vector16cd b = Vector16cd::Zero();
  b(0) = 1.0;

  const Eigen::PartialPivLU<Matrix16cd> lu(a);
  Vector16cd x = lu.solve(b);
  for (int pass = 0; pass < 2; ++pass) {
    const Vector16cd residual = b - a * x;
    x += lu.solve(residual);
  }

  const double residual = (l * x).cwiseAbs().maxCoeff();
  if (!(residual < 1e-12 * l_norm)) {
    std::ostringstream msg;
    msg << "solve_steady: residual " << residual << " exceeds 1e-12 * ||L|| = " << 1e-12 * l_norm;
    throw std::runtime_error(msg.str());
  }

  DensityMatrix rho = hermitized(x);
  rho.matrix /= rho.matrix.trace().real();
  return rho;
}

DensityMatrix evolve_to_steady(const LiouvillianMatrix& liouvillian, const DensityMatrix& rho0,
                               double tol, const EvolveOptions& options) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("evolve_to_steady: tol must be positive");
  }
  if (rho0.hermiticity_error() > 1e-10 || rho0.trace_error() > 1e-10) {
    throw std::invalid_argument("evolve_to_steady: rho0 is not a valid density matrix");
  }

  const Matrix16cd& l = liouvillian.matrix;
  const double l_norm = liouvillian.inf_norm();
  if (l_norm == 0.0) return rho0;

  const double h = options.step_safety / l_norm;
  const Matrix16cd hl = h * l;

  // One fixed RK4 step of the linear system is itself linear:
  // x_{n+1} = (I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24) x_n.
  Matrix16cd step = Matrix16cd::Identity();
  Matrix16cd term = Matrix16cd::Identity();
  for (int k = 1; k <= 4; ++k) {
    term = (term * hl / static_cast<double>(k)).eval();
    step += term;
  }

  // 2^chunk_log2 steps per applied chunk.
  Matrix16cd chunk = step;
  for (int k = 0; k < options.chunk_log2; ++k) chunk = (chunk * chunk).eval();

  const Vector16cd trace = trace_row();
  Vector16cd x = vectorize(rho0.matrix);
  std::int64_t chunks = 0;
  std::int64_t crossing = -1;
  double residual = (l * x).cwiseAbs().maxCoeff();

  while (chunks < options.max_chunks) {
    x = chunk * x;
    // The chunk propagator preserves trace only to roundoff; the trace
    // direction is neutral, so drift would otherwise accumulate linearly.
    x /= (trace.adjoint() * x)(0).real();
    ++chunks;
    residual = (l * x).cwiseAbs().maxCoeff();
    if (crossing < 0 && residual < tol) crossing = chunks;
    if (crossing > 0 &&
        chunks >= std::max(options.settle_factor * crossing, crossing + options.min_settle_chunks))
      break;
  }

  if (crossing < 0) {
    std::ostringstream msg;
    msg << "evolve_to_steady: no convergence after " << chunks << " chunks of 2^"
        << options.chunk_log2 << " steps; residual " << residual << " (tol " << tol << ")";
    throw std::runtime_error(msg.str());
  }
  return hermitized(x);
}

std::complex<double> probe_susceptibility(const DensityMatrix& steady_state,
                                          const TripodModel& model) {
  const double omega_p = model.probe.rabi_bar;
  if (omega_p == 0.0) {
    throw std::domain_error(
        "probe_susceptibility: probe Rabi frequency is zero; use the analytic susceptibility "
        "for the probe-free limit");
  }
  const Matrix4cd& rho = steady_state.matrix;
  const double rho_ee = rho(kExcited, kExcited).real();
  const double amplitude = 1.0;

  if (model.configuration == Configuration::kSigmaProbe) {
    const double w_minus = rho(kGroundMinus, kGroundMinus).real() - rho_ee;
    const double w_plus = rho(kGroundPlus, kGroundPlus).real() - rho_ee;
    if (!(w_minus > 0.0) || !(w_plus > 0.0)) {
      throw std::runtime_error("probe_susceptibility: probe population difference vanishes");
    }
    return amplitude *
           (rho(kExcited, kGroundMinus) / w_minus + rho(kExcited, kGroundPlus) / w_plus) / omega_p;
  }
  const double w_zero = rho(kGroundZero, kGroundZero).real() - rho_ee;
  if (!(w_zero > 0.0)) {
    throw std::runtime_error("probe_susceptibility: probe population difference vanishes");
  }
  return amplitude * rho(kExcited, kGroundZero) / (w_zero * omega_p);
}

}  // namespace tripod
