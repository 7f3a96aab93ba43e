#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smix/classical.hpp"
#include "smix/states.hpp"

namespace smix {

/// Convex decomposition rho = sum_k w_k rho_k with components sorted by
/// descending weight.
struct Decomposition {
  std::vector<double> weights;
  std::vector<DensityMatrix> components;

  std::size_t size() const noexcept { return weights.size(); }
  CMatrix mixture() const;
  /// max-abs distance between the mixture and `rho`.
  double reconstruction_error(const DensityMatrix& rho) const;
  bool all_pure(double tol = 1e-9) const;
  /// Sorts by weight, descending; ties keep input order.
  void sort_by_weight();
};

/// m x r matrix with orthonormal columns (checked to 1e-10).
class IsometryParam {
 public:
  explicit IsometryParam(CMatrix u);
  static IsometryParam identity(Eigen::Index m, Eigen::Index r);

  const CMatrix& matrix() const noexcept { return u_; }
  Eigen::Index rows() const noexcept { return u_.rows(); }
  Eigen::Index cols() const noexcept { return u_.cols(); }

 private:
  CMatrix u_;
};

struct SearchBudget {
  int restarts = 20;
  /// Refinement sweeps per restart.
  int iterations = 200;
  std::uint64_t seed = 42;
  /// Maximum number of components; 0 means rank^2 + 1.
  int m_cap = 0;
  /// Run the confirming search pass where a closed form is reported.
  bool cross_check = true;
};

struct SearchResult {
  Decomposition decomposition;
  double value = 0.0;
  bool converged = false;
  int restarts = 0;
  int sweeps = 0;
};

/// Weight functional (1 - alpha)^-1 log2 sum w^alpha; Shannon at alpha = 1,
/// log2(#nonzero) at alpha = 0. Weights are taken as given (no validation).
double weight_functional(std::span<const double> weights, Alpha a);

double smix_weight_value(const Decomposition& d, Alpha a);

/// Pure-state decomposition psi_k = sum_j U_kj sqrt(p_j) x_j over the
/// Schatten data of rho. U needs rank(rho) columns; each row may only touch
/// eigenvectors of a single central block. Zero-weight components are dropped
/// and components with fidelity >= 1 - 1e-10 are merged.
Decomposition decomposition_from_isometry(const DensityMatrix& rho, const IsometryParam& u);

/// Component cap used by the search, rank^2 + 1 unless the budget overrides it.
int component_cap(int rank, const SearchBudget& budget);

/// Random block-compatible isometry with m rows for rho's Schatten data.
IsometryParam random_isometry(const DensityMatrix& rho, int m, Rng& rng);

/// The first sample is the identity isometry (the Schatten decomposition);
/// the rest come from orthonormalized Gaussian matrices, one RNG stream each.
std::vector<Decomposition> sample_decompositions(const DensityMatrix& rho, int m, int n_samples,
                                                 std::uint64_t seed);

/// Multi-start search for the infimum of the weight functional over pure
/// decompositions. Each restart refines a random isometry with pairwise row
/// rotations (golden-section line search on the angle) and phase moves until
/// the relative improvement per sweep drops below 1e-10.
SearchResult minimize_weight_functional(const DensityMatrix& rho, Alpha a,
                                        const SearchBudget& budget);

/// Refine one given starting isometry. Exposed for tests.
SearchResult refine_isometry(const DensityMatrix& rho, Alpha a, const IsometryParam& start,
                             int max_sweeps);

}  // namespace smix
