#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "smix/decomp.hpp"
#include "smix/linalg.hpp"
#include "smix/rng.hpp"
#include "smix/states.hpp"

namespace smix::test {

inline std::vector<double> random_probs(Rng& rng, std::size_t n, double floor = 0.0) {
  std::vector<double> p(n);
  double s = 0.0;
  for (double& x : p) s += (x = floor + rng.uniform());
  for (double& x : p) x /= s;
  return p;
}

inline CMatrix random_unitary(int n, Rng& rng) {
  return orthonormalize_columns(gaussian_matrix(n, n, rng));
}

/// Random density matrix on `alg` with the requested rank per block (0 = full).
inline DensityMatrix random_state(const AlgebraModel& alg, Rng& rng, int rank = 0) {
  CMatrix m = CMatrix::Zero(alg.total_dim(), alg.total_dim());
  for (int b = 0; b < alg.num_blocks(); ++b) {
    const int n = alg.block_dim(b);
    const int r = rank > 0 ? std::min(rank, n) : n;
    const CMatrix g = gaussian_matrix(n, r, rng);
    m += alg.embed(g * g.adjoint(), b);
  }
  m /= m.trace().real();
  return validate_state(m, alg);
}

inline DensityMatrix diag_state(const std::vector<double>& d) {
  RVector v = Eigen::Map<const RVector>(d.data(), static_cast<Eigen::Index>(d.size()));
  return validate_state(v.cast<cplx>().asDiagonal().toDenseMatrix());
}

/// Direct evaluation of (1-a)^{-1} log2 sum w^a over positive weights.
inline double renyi_oracle(std::vector<double> w, double a) {
  std::erase_if(w, [](double x) { return x <= 0.0; });
  if (a == 1.0) {
    double s = 0.0;
    for (double x : w) s -= x * std::log2(x);
    return s;
  }
  if (a == 0.0) return std::log2(static_cast<double>(w.size()));
  double s = 0.0;
  for (double x : w) s += std::pow(x, a);
  return std::log2(s) / (1.0 - a);
}

inline std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace smix::test
