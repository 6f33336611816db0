#ifndef TRIPOD_LIOUVILLIAN_HPP
#define TRIPOD_LIOUVILLIAN_HPP

#include <Eigen/Dense>
#include <complex>

#include "tripod/model.hpp"

namespace tripod {

using Matrix4cd = Eigen::Matrix4cd;
using Matrix16cd = Eigen::Matrix<std::complex<double>, 16, 16>;
using Vector16cd = Eigen::Matrix<std::complex<double>, 16, 1>;

// Basis order used everywhere: excited, g_-1, g_0, g_+1.
enum BasisIndex : int { kExcited = 0, kGroundMinus = 1, kGroundZero = 2, kGroundPlus = 3 };

// Rotating frame in which the drive phases have been absorbed and the
// steady-state problem is time independent. The stationary variables are the
// tilde coherences: each listed density-matrix element rho_ij equals
// exp(-i w t) times the stored value, with w fixed by the frame.
struct RotatingFrame {
  Configuration configuration;
  // Frame level rotations leave these diagonal entries (in barred units):
  //   kSigmaProbe: (delta + Delta_C, +Delta_Z, delta, -Delta_Z)
  //   kPiProbe:    (delta + Delta_C, delta - Delta_Z, 0, delta + Delta_Z)
  // so that in both cases the probe coherences are stationary at the probe
  // frequency and the coupling coherences at the coupling frequency.
};

struct HamiltonianRWA {
  Matrix4cd matrix;     // Hermitian by construction
  RotatingFrame frame;
};

struct DensityMatrix {
  Matrix4cd matrix = Matrix4cd::Zero();

  double trace_error() const;        // |tr(rho) - 1|
  double hermiticity_error() const;  // max |rho - rho^dagger|
  double min_eigenvalue() const;     // smallest eigenvalue of the Hermitized matrix

  // Hermitian within hermiticity_tol, unit trace within trace_tol,
  // eigenvalues >= -positivity_tol.
  bool is_physical(double hermiticity_tol = 1e-10, double trace_tol = 1e-10,
                   double positivity_tol = 1e-8) const;

  static DensityMatrix ground_mixture();  // diag(0, 1/3, 1/3, 1/3)
  static DensityMatrix pure(int level);
};

// 16x16 superoperator acting on column-stacked density matrices:
// L vec(rho) = vec(-i [H, rho] + R rho).
struct LiouvillianMatrix {
  Matrix16cd matrix;

  double inf_norm() const;             // max absolute row sum
  double trace_preservation_error() const;  // max entry of vec(I)^H L
};

// Column-stacking vectorization (Eigen's native layout).
Vector16cd vectorize(const Matrix4cd& m);
Matrix4cd unvectorize(const Vector16cd& v);

HamiltonianRWA build_hamiltonian(const TripodModel& model);

// Relaxation superoperator: excited population decays at gamma0_bar split
// equally over the ground states; every population relaxes at gammaT_bar
// toward diag(0,1/3,1/3,1/3); optical coherences decay at optical_bar
// (default kOpticalCoherenceRateBar); ground-ground coherences at gammaR_bar.
Matrix16cd build_relaxation(const RelaxationRates& rates);

LiouvillianMatrix assemble_liouvillian(const HamiltonianRWA& hamiltonian,
                                       const Matrix16cd& relaxation);

// build + assemble in one step.
LiouvillianMatrix build_liouvillian(const TripodModel& model);

}  // namespace tripod

#endif
