#pragma once

#include <vector>

#include "smix/classical.hpp"
#include "smix/linalg.hpp"

namespace smix {

constexpr double kStateTolerance = 1e-10;
/// Eigenvalues at or below this are treated as exact zeros.
constexpr double kRankCutoff = 1e-12;

/// Finite direct sum M_{n_1} + ... + M_{n_m}, realized as block-diagonal
/// matrices of size total_dim.
class AlgebraModel {
 public:
  explicit AlgebraModel(std::vector<int> block_dims);

  static AlgebraModel full_matrix(int n) { return AlgebraModel({n}); }

  const std::vector<int>& block_dims() const noexcept { return dims_; }
  int num_blocks() const noexcept { return static_cast<int>(dims_.size()); }
  int total_dim() const noexcept { return total_; }
  int block_offset(int b) const { return offsets_.at(static_cast<std::size_t>(b)); }
  int block_dim(int b) const { return dims_.at(static_cast<std::size_t>(b)); }
  /// Block containing basis index i.
  int block_of(int i) const;
  /// Dimension of the algebra as a vector space, sum n_i^2.
  int linear_dim() const noexcept;

  /// max |m_ij| over entries outside the diagonal blocks.
  double off_block_norm(const CMatrix& m) const;
  CMatrix block(const CMatrix& m, int b) const;
  /// Embed a block-sized matrix at block b of an otherwise zero matrix.
  CMatrix embed(const CMatrix& block_matrix, int b) const;

  bool operator==(const AlgebraModel& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

/// Positive, unit-trace Hermitian element of an AlgebraModel. Only
/// constructible through validate_state, so every instance satisfies the
/// state invariants.
class DensityMatrix {
 public:
  const AlgebraModel& algebra() const noexcept { return algebra_; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return algebra_.total_dim(); }

  /// phi(A) = Tr(rho A).
  cplx expectation(const CMatrix& a) const { return (matrix_ * a).trace(); }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

  friend DensityMatrix validate_state(const CMatrix& m, const AlgebraModel& alg);

 private:
  DensityMatrix(AlgebraModel alg, CMatrix m) : algebra_(std::move(alg)), matrix_(std::move(m)) {}

  AlgebraModel algebra_;
  CMatrix matrix_;
};

/// Spectral data of a state: eigenvalues descending, clamped at kRankCutoff.
struct SpectralData {
  RVector eigenvalues;
  CMatrix eigenvectors;

  int rank() const;
  std::vector<double> eigenvalue_vector() const;
  ProbDist as_distribution() const;
  /// sum p_k |x_k><x_k|
  CMatrix reconstruct() const;
};

/// Symmetrizes (m + m^dagger)/2 after checking hermiticity, then checks
/// block structure, trace and positivity in that order.
DensityMatrix validate_state(const CMatrix& m, const AlgebraModel& alg);

/// Convenience for single-block states.
DensityMatrix validate_state(const CMatrix& m);

/// |psi><psi| / <psi|psi> on a single block M_n.
DensityMatrix pure_state(const CVector& psi);

SpectralData schatten(const DensityMatrix& rho);

/// Prefix-sum dominance of sorted p over sorted q. Inputs are sorted
/// descending internally and the shorter one is zero-padded.
bool majorizes(std::vector<double> p, std::vector<double> q, double slack = kStateTolerance);

/// Orthogonal projection onto the range of a state.
CMatrix support_projection(const DensityMatrix& rho);

/// supp(rho1) * supp(rho2) == 0 within 1e-9.
bool orthogonal_states(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Kronecker product of two single-block states.
DensityMatrix tensor(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Trace mass of each central block.
ProbDist block_weights(const DensityMatrix& rho);

}  // namespace smix
