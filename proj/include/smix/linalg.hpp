#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "smix/rng.hpp"

namespace smix {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order and
/// eigenvectors stored as the matching columns.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
  int sweeps = 0;
};

constexpr int kJacobiMaxSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;

/// Cyclic complex Jacobi. Only the Hermitian part of `m` is used. Throws
/// Error(NotConverged) if the off-diagonal norm does not drop below
/// kJacobiTolerance * max(1, ||m||_F) within `max_sweeps`.
HermitianEigen jacobi_eigen(const CMatrix& m, int max_sweeps = kJacobiMaxSweeps);

double max_abs(const CMatrix& m);

/// max |m - m^dagger|.
double hermiticity_defect(const CMatrix& m);

/// Apply f to the eigenvalues of a Hermitian matrix.
template <class F>
CMatrix hermitian_function(const CMatrix& m, F&& f) {
  const HermitianEigen e = jacobi_eigen(m);
  RVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = f(e.values(i));
  return e.vectors * mapped.asDiagonal() * e.vectors.adjoint();
}

/// Orthonormal columns by two passes of modified Gram-Schmidt. Columns that
/// collapse are left as produced; callers use this on generic inputs only.
CMatrix orthonormalize_columns(CMatrix m);

/// rows x cols complex matrix with iid standard normal real and imaginary parts.
CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Group sorted eigenvalues into clusters whose neighbours differ by at most
/// `tol`. Returns [begin, end) index ranges.
std::vector<std::pair<Eigen::Index, Eigen::Index>> eigen_clusters(const RVector& descending,
                                                                  double tol);

}  // namespace smix
