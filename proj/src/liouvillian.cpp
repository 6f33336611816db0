#include "tripod/liouvillian.hpp"

#include <cmath>

namespace tripod {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

double DensityMatrix::trace_error() const { return std::abs(matrix.trace() - 1.0); }

double DensityMatrix::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix4cd hermitized = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(hermitized, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double hermiticity_tol, double trace_tol,
                                double positivity_tol) const {
  return hermiticity_error() <= hermiticity_tol && trace_error() <= trace_tol &&
         min_eigenvalue() >= -positivity_tol;
}

DensityMatrix DensityMatrix::ground_mixture() {
  DensityMatrix rho;
  rho.matrix.diagonal() << 0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
  return rho;
}

DensityMatrix DensityMatrix::pure(int level) {
  DensityMatrix rho;
  rho.matrix(level, level) = 1.0;
  return rho;
}

double LiouvillianMatrix::inf_norm() const { return matrix.cwiseAbs().rowwise().sum().maxCoeff(); }

double LiouvillianMatrix::trace_preservation_error() const {
  Vector16cd trace_row = Vector16cd::Zero();
  for (int i = 0; i < 4; ++i) trace_row(5 * i) = 1.0;
  return (trace_row.adjoint() * matrix).cwiseAbs().maxCoeff();
}

Vector16cd vectorize(const Matrix4cd& m) { return Eigen::Map<const Vector16cd>(m.data()); }

Matrix4cd unvectorize(const Vector16cd& v) { return Eigen::Map<const Matrix4cd>(v.data()); }

HamiltonianRWA build_hamiltonian(const TripodModel& model) {
  model.validate();
  const double delta = model.raman_detuning_bar();
  const double delta_c = model.coupling.optical_detuning_bar;
  const double delta_z = model.zeeman.delta_z_bar;
  const double omega_p = model.probe.rabi_bar;
  const double omega_c = model.coupling.rabi_bar;

  HamiltonianRWA h;
  h.frame = RotatingFrame{model.configuration};
  Matrix4cd& m = h.matrix;
  m.setZero();

  if (model.configuration == Configuration::kSigmaProbe) {
    // Probe sigma+- on e<->g-/g+ (Omega_P/sqrt(2) each), coupling pi on e<->g0.
    m(kExcited, kExcited) = delta + delta_c;
    m(kGroundMinus, kGroundMinus) = +delta_z;
    m(kGroundZero, kGroundZero) = delta;
    m(kGroundPlus, kGroundPlus) = -delta_z;
    m(kExcited, kGroundMinus) = -omega_p * kInvSqrt2 / 2.0;
    m(kExcited, kGroundPlus) = -omega_p * kInvSqrt2 / 2.0;
    m(kExcited, kGroundZero) = -omega_c / 2.0;
  } else {
    // Probe pi on e<->g0, coupling sigma+- on e<->g-/g+ (Omega_C/sqrt(2) each).
    m(kExcited, kExcited) = delta + delta_c;
    m(kGroundMinus, kGroundMinus) = delta - delta_z;
    m(kGroundZero, kGroundZero) = 0.0;
    m(kGroundPlus, kGroundPlus) = delta + delta_z;
    m(kExcited, kGroundMinus) = -omega_c * kInvSqrt2 / 2.0;
    m(kExcited, kGroundPlus) = -omega_c * kInvSqrt2 / 2.0;
    m(kExcited, kGroundZero) = -omega_p / 2.0;
  }

  for (int r = 0; r < 4; ++r) {
    for (int c = r + 1; c < 4; ++c) m(c, r) = std::conj(m(r, c));
  }
  return h;
}

Matrix16cd build_relaxation(const RelaxationRates& rates) {
  rates.validate();
  Matrix16cd relaxation = Matrix16cd::Zero();

  // Column-stacking index of rho(r, c).
  const auto idx = [](int r, int c) { return 4 * c + r; };

  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const int col = idx(r, c);
      if (r == c) {
        if (r == kExcited) {
          // Spontaneous decay out of e, split equally over the ground states.
          relaxation(idx(kExcited, kExcited), col) -= rates.gamma0_bar;
          for (int g = 1; g < 4; ++g) relaxation(idx(g, g), col) += rates.gamma0_bar / 3.0;
        }
        // Transit: populations relax toward diag(0, 1/3, 1/3, 1/3) * tr(rho).
        relaxation(idx(r, r), col) -= rates.gammaT_bar;
        for (int g = 1; g < 4; ++g) relaxation(idx(g, g), col) += rates.gammaT_bar / 3.0;
      } else if (r == kExcited || c == kExcited) {
        relaxation(col, col) -= rates.optical_bar;
      } else {
        relaxation(col, col) -= rates.gammaR_bar;
      }
    }
  }
  return relaxation;
}

LiouvillianMatrix assemble_liouvillian(const HamiltonianRWA& hamiltonian,
                                       const Matrix16cd& relaxation) {
  const Matrix4cd& h = hamiltonian.matrix;
  const Matrix4cd identity = Matrix4cd::Identity();
  Matrix16cd commutator = Matrix16cd::Zero();
  // vec([H, rho]) = (I (x) H - H^T (x) I) vec(rho) for column stacking.
  for (int bc = 0; bc < 4; ++bc) {
    for (int br = 0; br < 4; ++br) {
      commutator.block<4, 4>(4 * br, 4 * bc) =
          identity(br, bc) * h - h.transpose()(br, bc) * identity;
    }
  }
  LiouvillianMatrix liouvillian;
  liouvillian.matrix = -kI * commutator + relaxation;
  return liouvillian;
}

LiouvillianMatrix build_liouvillian(const TripodModel& model) {
  return assemble_liouvillian(build_hamiltonian(model), build_relaxation(model.rates));
}

}  // namespace tripod
