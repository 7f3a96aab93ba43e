#include "smix/refsys.hpp"

#include <algorithm>
#include <cmath>

#include "smix/error.hpp"

namespace smix {

namespace {

CVector to_coeffs(const CMatrix& a, const std::vector<std::pair<int, int>>& units) {
  CVector c(static_cast<Eigen::Index>(units.size()));
  for (std::size_t mu = 0; mu < units.size(); ++mu)
    c(static_cast<Eigen::Index>(mu)) = a(units[mu].first, units[mu].second);
  return c;
}

CMatrix unit_matrix(int n, const std::pair<int, int>& pos) {
  CMatrix e = CMatrix::Zero(n, n);
  e(pos.first, pos.second) = 1.0;
  return e;
}

/// Matrix of the linear map x -> f(x) on algebra coefficients.
template <class F>
CMatrix coefficient_map(const AlgebraModel& alg, const std::vector<std::pair<int, int>>& units,
                        F&& f) {
  const auto n = static_cast<Eigen::Index>(units.size());
  CMatrix out(n, n);
  for (Eigen::Index nu = 0; nu < n; ++nu)
    out.col(nu) = to_coeffs(f(unit_matrix(alg.total_dim(), units[static_cast<std::size_t>(nu)])),
                            units);
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> matrix_units(const AlgebraModel& alg) {
  std::vector<std::pair<int, int>> units;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    const int off = alg.block_offset(b);
    for (int i = 0; i < alg.block_dim(b); ++i)
      for (int j = 0; j < alg.block_dim(b); ++j) units.emplace_back(off + i, off + j);
  }
  return units;
}

CMatrix GnsData::represent(const CMatrix& a) const {
  const auto units = matrix_units(algebra);
  const CMatrix left =
      coefficient_map(algebra, units, [&](const CMatrix& e) -> CMatrix { return a * e; });
  return to_gns * left * from_gns;
}

GnsData gns_construct(const AlgebraModel& alg, const DensityMatrix& rho, const Dynamics& dyn) {
  if (!(rho.algebra() == alg) || !(dyn.algebra() == alg))
    throw Error(ErrorKind::InvalidArgument, "state, dynamics and algebra must agree");
  if (!is_invariant(rho, dyn))
    throw Error(ErrorKind::NotInvariant, "implementing unitaries need an invariant state");

  const auto units = matrix_units(alg);
  const auto n = static_cast<Eigen::Index>(units.size());
  const int dim = alg.total_dim();

  // <e_mu, e_nu> = phi(e_mu^* e_nu) = rho(l, j) for e_mu = e_ij, e_nu = e_il.
  CMatrix gram = CMatrix::Zero(n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu)
    for (Eigen::Index nu = 0; nu < n; ++nu) {
      const auto [i, j] = units[static_cast<std::size_t>(mu)];
      const auto [k, l] = units[static_cast<std::size_t>(nu)];
      if (i == k) gram(mu, nu) = rho.matrix()(l, j);
    }
  const HermitianEigen eg = jacobi_eigen(gram);
  const auto rank = static_cast<Eigen::Index>((eg.values.array() > kRankCutoff).count());

  GnsData g{alg, static_cast<int>(rank), {}, {}, {}, {}, {}};
  const RVector sqrt_l = eg.values.head(rank).cwiseSqrt();
  const CMatrix w = eg.vectors.leftCols(rank);
  g.to_gns = sqrt_l.cast<cplx>().asDiagonal() * w.adjoint();
  g.from_gns = w * sqrt_l.cwiseInverse().cast<cplx>().asDiagonal();

  for (const auto& pos : units) {
    const CMatrix e = unit_matrix(dim, pos);
    const CMatrix left =
        coefficient_map(alg, units, [&](const CMatrix& x) -> CMatrix { return e * x; });
    g.rep_matrices.push_back(g.to_gns * left * g.from_gns);
  }
  g.cyclic_vector = g.to_gns * to_coeffs(CMatrix::Identity(dim, dim), units);

  if (dyn.kind() == DynamicsKind::HamiltonianFlow) {
    const CMatrix& h = dyn.hamiltonian();
    const CMatrix ad =
        coefficient_map(alg, units, [&](const CMatrix& x) -> CMatrix { return h * x - x * h; });
    const CMatrix k = g.to_gns * ad * g.from_gns;
    const HermitianEigen ek = jacobi_eigen(k);
    const double tol = 1e-9 * std::max(1.0, h.norm());
    CMatrix fixed(rank, 0);
    for (Eigen::Index i = 0; i < ek.values.size(); ++i)
      if (std::abs(ek.values(i)) <= tol) {
        fixed.conservativeResize(Eigen::NoChange, fixed.cols() + 1);
        fixed.col(fixed.cols() - 1) = ek.vectors.col(i);
      }
    g.invariant_projection = fixed * fixed.adjoint();
  } else {
    CMatrix avg = CMatrix::Zero(rank, rank);
    for (const CMatrix& u : dyn.unitaries()) {
      const CMatrix ad = coefficient_map(
          alg, units, [&](const CMatrix& x) -> CMatrix { return u * x * u.adjoint(); });
      avg += g.to_gns * ad * g.from_gns;
    }
    avg /= static_cast<double>(dyn.unitaries().size());
    g.invariant_projection = 0.5 * (avg + avg.adjoint());
  }
  return g;
}

double gns_reproduction_error(const GnsData& g, const DensityMatrix& rho) {
  const auto units = matrix_units(g.algebra);
  double worst = 0.0;
  for (std::size_t mu = 0; mu < units.size(); ++mu) {
    const cplx lhs = g.cyclic_vector.dot(g.rep_matrices[mu] * g.cyclic_vector);
    const cplx rhs = rho.matrix()(units[mu].second, units[mu].first);  // Tr(rho e_ij) = rho_ji
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

bool is_g_commutative(const GnsData& g, const AlgebraModel& alg) {
  if (!(g.algebra == alg)) throw Error(ErrorKind::InvalidArgument, "GNS data for another algebra");
  const CMatrix& e = g.invariant_projection;
  std::vector<CMatrix> compressed;
  for (const CMatrix& p : g.rep_matrices) compressed.push_back(e * p * e);
  for (std::size_t a = 0; a < compressed.size(); ++a)
    for (std::size_t b = a + 1; b < compressed.size(); ++b)
      if (max_abs(compressed[a] * compressed[b] - compressed[b] * compressed[a]) > 1e-9)
        return false;
  return true;
}

}  // namespace smix
