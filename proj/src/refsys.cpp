#include "smix/refsys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smix/error.hpp"

namespace smix {

namespace {

constexpr double kGroupTolerance = 1e-9;
constexpr double kDegeneracyTolerance = 1e-10;
constexpr double kSectorMassCutoff = 1e-14;

void require_block_diagonal(const CMatrix& m, const AlgebraModel& alg, const std::string& what) {
  const int n = alg.total_dim();
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorKind::InvalidDynamics, what + " must be " + std::to_string(n) + "x" +
                                                std::to_string(n));
  if (alg.off_block_norm(m) > 1e-12)
    throw Error(ErrorKind::InvalidDynamics, what + " is not block-diagonal");
}

/// Zero the off-block entries that passed the tolerance check.
CMatrix project_blocks(const CMatrix& m, const AlgebraModel& alg) {
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (int b = 0; b < alg.num_blocks(); ++b) out += alg.embed(alg.block(m, b), b);
  return out;
}

CMatrix group_average(const std::vector<CMatrix>& group, const CMatrix& x) {
  CMatrix acc = CMatrix::Zero(x.rows(), x.cols());
  for (const CMatrix& u : group) acc += u * x * u.adjoint();
  return acc / static_cast<double>(group.size());
}

CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const CMatrix g = gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

void add_hamiltonian_sectors(const Dynamics& dyn, const AlgebraModel& alg, int b,
                             std::vector<InvariantSector>& out) {
  const CMatrix hb = alg.block(dyn.hamiltonian(), b);
  const HermitianEigen e = jacobi_eigen(hb);
  const double tol = kDegeneracyTolerance * std::max(1.0, hb.norm());
  // Clusters come out in descending energy; report ascending.
  auto clusters = eigen_clusters(e.values, tol);
  std::reverse(clusters.begin(), clusters.end());
  for (const auto& [begin, end] : clusters) {
    InvariantSector s;
    s.algebra_block = b;
    s.multiplicity = static_cast<int>(end - begin);
    s.irrep_dim = 1;
    s.energy = e.values.segment(begin, end - begin).mean();
    s.basis = CMatrix::Zero(alg.total_dim(), end - begin);
    s.basis.block(alg.block_offset(b), 0, alg.block_dim(b), end - begin) =
        e.vectors.middleCols(begin, end - begin);
    out.push_back(std::move(s));
  }
}

void add_group_sectors(const Dynamics& dyn, const AlgebraModel& alg, int b,
                       std::vector<InvariantSector>& out) {
  const int n = alg.block_dim(b);
  std::vector<CMatrix> group;
  for (const CMatrix& u : dyn.unitaries()) group.push_back(alg.block(u, b));
  Rng rng = Rng::stream(0x6a09e667f3bcc908ULL, static_cast<std::uint64_t>(b));

  // A generic Hermitian element of the centre of span{U_g} separates the
  // isotypic components.
  CMatrix y = CMatrix::Zero(n, n);
  for (const CMatrix& u : group) y += rng.normal() * u;
  const CMatrix z = group_average(group, 0.5 * (y + y.adjoint()));
  const HermitianEigen ez = jacobi_eigen(z);
  const double ztol = 1e-8 * std::max(1.0, z.norm());

  for (const auto& [zb, ze] : eigen_clusters(ez.values, ztol)) {
    const CMatrix w = ez.vectors.middleCols(zb, ze - zb);  // isotypic component
    const Eigen::Index dim_w = w.cols();

    // Generic commutant element: eigenspaces are copies of one irrep.
    const CMatrix c = w.adjoint() *
                      group_average(group, w * random_hermitian(dim_w, rng) * w.adjoint()) * w;
    const HermitianEigen ec = jacobi_eigen(c);
    const auto copies = eigen_clusters(ec.values, 1e-8 * std::max(1.0, c.norm()));
    const Eigen::Index d = copies.front().second - copies.front().first;
    for (const auto& [cb, ce] : copies)
      if (ce - cb != d)
        throw Error(ErrorKind::InvalidDynamics, "could not resolve irreducible components");
    const Eigen::Index k = static_cast<Eigen::Index>(copies.size());

    // Intertwiners from the first copy fix a product basis (copy, irrep index).
    const CMatrix t = w.adjoint() *
                      group_average(group, w * gaussian_matrix(dim_w, dim_w, rng) * w.adjoint()) *
                      w;
    const CMatrix e0 = ec.vectors.middleCols(copies[0].first, d);
    CMatrix basis_w(dim_w, k * d);
    basis_w.leftCols(d) = e0;
    for (Eigen::Index i = 1; i < k; ++i) {
      const CMatrix ei = ec.vectors.middleCols(copies[static_cast<std::size_t>(i)].first, d);
      CMatrix m = ei.adjoint() * t * e0;
      const double scale = std::sqrt(static_cast<double>(d) / (m.adjoint() * m).trace().real());
      basis_w.middleCols(i * d, d) = ei * (m * scale);
    }

    InvariantSector s;
    s.algebra_block = b;
    s.multiplicity = static_cast<int>(k);
    s.irrep_dim = static_cast<int>(d);
    s.basis = CMatrix::Zero(alg.total_dim(), k * d);
    s.basis.block(alg.block_offset(b), 0, n, k * d) = w * basis_w;
    out.push_back(std::move(s));
  }
}

/// sigma_ij = sum_a <b_{ia}| rho |b_{ja}>.
CMatrix reduce_to_multiplicity(const InvariantSector& s, const CMatrix& rho) {
  const CMatrix full = s.basis.adjoint() * rho * s.basis;
  const int k = s.multiplicity, d = s.irrep_dim;
  CMatrix sigma = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int a = 0; a < d; ++a) sigma(i, j) += full(i * d + a, j * d + a);
  return sigma;
}

CMatrix block_gibbs(const CMatrix& hb, double beta) {
  const HermitianEigen e = jacobi_eigen(hb);
  const double emin = e.values.minCoeff();
  RVector boltz(e.values.size());
  for (Eigen::Index i = 0; i < boltz.size(); ++i) boltz(i) = std::exp(-beta * (e.values(i) - emin));
  boltz /= boltz.sum();
  return e.vectors * boltz.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

void require_beta(double beta) {
  if (!std::isfinite(beta) || beta <= 0.0)
    throw Error(ErrorKind::InvalidArgument, "beta must be > 0");
}

void require_flow(const Dynamics& dyn) {
  if (dyn.kind() != DynamicsKind::HamiltonianFlow)
    throw Error(ErrorKind::InvalidDynamics, "KMS states need a Hamiltonian flow");
}

}  // namespace

Dynamics Dynamics::hamiltonian(const CMatrix& h, const AlgebraModel& alg) {
  require_block_diagonal(h, alg, "hamiltonian");
  if (hermiticity_defect(h) > 1e-10)
    throw Error(ErrorKind::InvalidDynamics, "hamiltonian is not Hermitian");
  Dynamics d(DynamicsKind::HamiltonianFlow, alg);
  CMatrix herm = project_blocks(0.5 * (h + h.adjoint()), alg);
  d.h_ = std::move(herm);
  return d;
}

Dynamics Dynamics::finite_group(std::vector<CMatrix> unitaries, const AlgebraModel& alg) {
  if (unitaries.empty()) throw Error(ErrorKind::InvalidDynamics, "group has no elements");
  const int n = alg.total_dim();
  const CMatrix id = CMatrix::Identity(n, n);
  for (std::size_t g = 0; g < unitaries.size(); ++g) {
    const std::string name = "unitaries[" + std::to_string(g) + "]";
    require_block_diagonal(unitaries[g], alg, name);
    if (max_abs(unitaries[g].adjoint() * unitaries[g] - id) > 1e-10)
      throw Error(ErrorKind::InvalidDynamics, name + " is not unitary");
    unitaries[g] = project_blocks(unitaries[g], alg);
  }
  auto member = [&](const CMatrix& m) {
    return std::any_of(unitaries.begin(), unitaries.end(),
                       [&](const CMatrix& u) { return max_abs(u - m) <= kGroupTolerance; });
  };
  if (!member(id)) throw Error(ErrorKind::InvalidDynamics, "group does not contain the identity");
  for (const CMatrix& a : unitaries)
    for (const CMatrix& b : unitaries)
      if (!member(a * b))
        throw Error(ErrorKind::InvalidDynamics, "unitaries are not closed under products");
  Dynamics d(DynamicsKind::FiniteGroup, alg);
  d.unitaries_ = std::move(unitaries);
  return d;
}

Dynamics Dynamics::trivial(const AlgebraModel& alg) {
  const int n = alg.total_dim();
  return finite_group({CMatrix::Identity(n, n)}, alg);
}

const CMatrix& Dynamics::hamiltonian() const {
  if (kind_ != DynamicsKind::HamiltonianFlow)
    throw Error(ErrorKind::InvalidDynamics, "dynamics has no Hamiltonian generator");
  return h_;
}

bool Dynamics::nondegenerate_generator() const {
  if (kind_ != DynamicsKind::HamiltonianFlow) return false;
  for (int b = 0; b < algebra_.num_blocks(); ++b) {
    const CMatrix hb = algebra_.block(h_, b);
    const HermitianEigen e = jacobi_eigen(hb);
    const double tol = kDegeneracyTolerance * std::max(1.0, hb.norm());
    if (eigen_clusters(e.values, tol).size() != static_cast<std::size_t>(hb.rows())) return false;
  }
  return true;
}

const char* reference_name(ReferenceTag tag) noexcept {
  switch (tag) {
    case ReferenceTag::FullStateSpace: return "full";
    case ReferenceTag::InvariantStates: return "invariant";
    case ReferenceTag::KMSStates: return "kms";
  }
  return "unknown";
}

std::optional<ReferenceTag> parse_reference(const std::string& name) {
  if (name == "full") return ReferenceTag::FullStateSpace;
  if (name == "invariant") return ReferenceTag::InvariantStates;
  if (name == "kms") return ReferenceTag::KMSStates;
  return std::nullopt;
}

ReferenceSystem ReferenceSystem::invariant(Dynamics dyn) {
  ReferenceSystem r;
  r.tag = ReferenceTag::InvariantStates;
  r.dynamics = std::move(dyn);
  return r;
}

ReferenceSystem ReferenceSystem::kms(Dynamics dyn, double beta) {
  require_flow(dyn);
  require_beta(beta);
  ReferenceSystem r;
  r.tag = ReferenceTag::KMSStates;
  r.dynamics = std::move(dyn);
  r.beta = beta;
  return r;
}

bool is_invariant(const DensityMatrix& rho, const Dynamics& dyn) {
  if (!(rho.algebra() == dyn.algebra()))
    throw Error(ErrorKind::InvalidArgument, "state and dynamics live on different algebras");
  const CMatrix& r = rho.matrix();
  if (dyn.kind() == DynamicsKind::HamiltonianFlow) {
    const CMatrix& h = dyn.hamiltonian();
    return max_abs(h * r - r * h) <= kInvarianceTolerance;
  }
  return std::all_of(dyn.unitaries().begin(), dyn.unitaries().end(), [&](const CMatrix& u) {
    return max_abs(u * r * u.adjoint() - r) <= kInvarianceTolerance;
  });
}

InvariantStructure extremal_invariant_states(const Dynamics& dyn, const AlgebraModel& alg) {
  if (!(alg == dyn.algebra()))
    throw Error(ErrorKind::InvalidArgument, "dynamics defined on a different algebra");
  InvariantStructure out;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    if (dyn.kind() == DynamicsKind::HamiltonianFlow)
      add_hamiltonian_sectors(dyn, alg, b, out.sectors);
    else
      add_group_sectors(dyn, alg, b, out.sectors);
  }
  for (const InvariantSector& s : out.sectors)
    for (int i = 0; i < s.multiplicity; ++i)
      out.representatives.push_back(sector_state(s, CVector::Unit(s.multiplicity, i), alg));
  return out;
}

DensityMatrix sector_state(const InvariantSector& s, const CVector& v, const AlgebraModel& alg) {
  const int d = s.irrep_dim;
  const CVector u = v / v.norm();
  CMatrix m = CMatrix::Zero(alg.total_dim(), alg.total_dim());
  for (int a = 0; a < d; ++a) {
    CVector x = CVector::Zero(alg.total_dim());
    for (int i = 0; i < s.multiplicity; ++i) x += u(i) * s.basis.col(i * d + a);
    m += x * x.adjoint();
  }
  m /= static_cast<double>(d);
  return validate_state(project_blocks(m, alg), alg);
}

bool ErgodicDecomposition::has_degenerate_sector() const {
  return std::any_of(parts.begin(), parts.end(), [](const SectorPart& p) { return p.degenerate; });
}

ErgodicDecomposition ergodic_decompose(const DensityMatrix& rho, const Dynamics& dyn) {
  if (!is_invariant(rho, dyn))
    throw Error(ErrorKind::NotInvariant, "state is not invariant under the dynamics");
  const AlgebraModel& alg = rho.algebra();
  ErgodicDecomposition out;
  out.structure = extremal_invariant_states(dyn, alg);
  for (std::size_t si = 0; si < out.structure.sectors.size(); ++si) {
    const InvariantSector& s = out.structure.sectors[si];
    const CMatrix sigma = reduce_to_multiplicity(s, rho.matrix());
    const double mass = sigma.trace().real();
    if (mass <= kSectorMassCutoff) continue;

    SectorPart part;
    part.sector = si;
    part.mass = mass;
    const CMatrix normalized = 0.5 * (sigma + sigma.adjoint()) / mass;
    part.reduced = validate_state(normalized);
    const SpectralData spec = schatten(*part.reduced);
    const int r = spec.rank();
    const RVector positive = spec.eigenvalues.head(r);
    part.degenerate = eigen_clusters(positive, kDegeneracyTolerance).size() !=
                      static_cast<std::size_t>(r);
    for (int t = 0; t < r; ++t) {
      const double w = mass * spec.eigenvalues(t);
      if (w < 1e-12) continue;
      out.decomposition.weights.push_back(w);
      out.decomposition.components.push_back(sector_state(s, spec.eigenvectors.col(t), alg));
    }
    out.parts.push_back(std::move(part));
  }
  out.decomposition.sort_by_weight();
  return out;
}

DensityMatrix gibbs_state(const Dynamics& dyn, double beta, const AlgebraModel& alg) {
  require_flow(dyn);
  require_beta(beta);
  if (!(alg == dyn.algebra()))
    throw Error(ErrorKind::InvalidArgument, "dynamics defined on a different algebra");
  // Global e^{-beta H}, assembled block by block against a common ground energy.
  const CMatrix& h = dyn.hamiltonian();
  const HermitianEigen all = jacobi_eigen(h);
  const double emin = all.values.minCoeff();
  CMatrix out = CMatrix::Zero(alg.total_dim(), alg.total_dim());
  double z = 0.0;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    const HermitianEigen e = jacobi_eigen(alg.block(h, b));
    RVector boltz(e.values.size());
    for (Eigen::Index i = 0; i < boltz.size(); ++i)
      boltz(i) = std::exp(-beta * (e.values(i) - emin));
    z += boltz.sum();
    out += alg.embed(e.vectors * boltz.cast<cplx>().asDiagonal() * e.vectors.adjoint(), b);
  }
  return validate_state(out / z, alg);
}

std::vector<DensityMatrix> extremal_kms_states(const Dynamics& dyn, double beta,
                                               const AlgebraModel& alg) {
  require_flow(dyn);
  require_beta(beta);
  std::vector<DensityMatrix> out;
  for (int b = 0; b < alg.num_blocks(); ++b)
    out.push_back(validate_state(alg.embed(block_gibbs(alg.block(dyn.hamiltonian(), b), beta), b),
                                 alg));
  return out;
}

bool is_kms(const DensityMatrix& rho, const Dynamics& dyn, double beta) {
  require_flow(dyn);
  require_beta(beta);
  const AlgebraModel& alg = rho.algebra();
  for (int b = 0; b < alg.num_blocks(); ++b) {
    const CMatrix rb = alg.block(rho.matrix(), b);
    const double mass = rb.trace().real();
    if (mass <= 1e-12) continue;
    if (max_abs(rb / mass - block_gibbs(alg.block(dyn.hamiltonian(), b), beta)) > kKmsTolerance)
      return false;
  }
  return true;
}

Decomposition kms_decompose(const DensityMatrix& rho, const Dynamics& dyn, double beta) {
  if (!is_kms(rho, dyn, beta))
    throw Error(ErrorKind::NotKMS, "some block restriction differs from the block Gibbs state");
  const AlgebraModel& alg = rho.algebra();
  const std::vector<DensityMatrix> extremal = extremal_kms_states(dyn, beta, alg);
  const ProbDist masses = block_weights(rho);
  Decomposition d;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    const double w = masses[static_cast<std::size_t>(b)];
    if (w <= 1e-12) continue;
    d.weights.push_back(w);
    d.components.push_back(extremal[static_cast<std::size_t>(b)]);
  }
  d.sort_by_weight();
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      if (!orthogonal_states(d.components[i], d.components[j]))
        throw Error(ErrorKind::NotKMS, "extremal KMS components are not orthogonal");
  return d;
}

}  // namespace smix
