#include <doctest.h>

#include "smix/error.hpp"
#include "smix/refsys.hpp"
#include "support.hpp"

using namespace smix;
using smix::test::diag_state;
using smix::test::random_state;
using smix::test::random_unitary;
using smix::test::sorted_desc;

namespace {
CMatrix diag(std::initializer_list<double> v) {
  RVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<cplx>().asDiagonal().toDenseMatrix();
}

CMatrix pauli(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = CMatrix::Identity(2, 2);
  }
  return m;
}

// The 16-element Pauli group, irreducible on C^2.
std::vector<CMatrix> pauli_group() {
  std::vector<CMatrix> g;
  for (char c : {'i', 'x', 'y', 'z'})
    for (int k = 0; k < 4; ++k) g.push_back(std::pow(cplx(0, 1), k) * pauli(c));
  return g;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix block_gibbs_mixture(const AlgebraModel& alg, const Dynamics& dyn, double beta,
                                  const std::vector<double>& w) {
  const auto ext = extremal_kms_states(dyn, beta, alg);
  CMatrix m = CMatrix::Zero(alg.total_dim(), alg.total_dim());
  for (std::size_t i = 0; i < w.size(); ++i) m += w[i] * ext[i].matrix();
  return validate_state(m, alg);
}
}  // namespace

TEST_CASE("dynamics validation") {
  const AlgebraModel m2({2});
  CHECK_THROWS_AS(Dynamics::hamiltonian(CMatrix::Identity(3, 3), m2), Error);
  CMatrix nh = pauli('x');
  nh(0, 1) = 2.0;
  CHECK_THROWS_AS(Dynamics::hamiltonian(nh, m2), Error);
  CMatrix cross = CMatrix::Zero(4, 4);
  cross(0, 3) = cross(3, 0) = 1.0;
  CHECK_THROWS_AS(Dynamics::hamiltonian(cross, AlgebraModel({2, 2})), Error);
  CHECK_THROWS_AS(Dynamics::finite_group({pauli('z')}, m2), Error);              // no identity
  CHECK_THROWS_AS(Dynamics::finite_group({pauli('i'), pauli('x'), pauli('z')}, m2), Error);  // not closed
  CHECK_NOTHROW(Dynamics::finite_group(pauli_group(), m2));
}

TEST_CASE("invariance examples") {
  const AlgebraModel m2({2});
  const Dynamics h = Dynamics::hamiltonian(pauli('z'), m2);
  CHECK(is_invariant(gibbs_state(h, 0.7, m2), h));
  CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  CHECK(!is_invariant(validate_state(plus), h));
  Rng rng(1);
  CHECK(is_invariant(random_state(m2, rng), Dynamics::trivial(m2)));
  const Dynamics z2 = Dynamics::finite_group({pauli('i'), pauli('z')}, m2);
  CHECK(is_invariant(diag_state({0.3, 0.7}), z2));
  CHECK(!is_invariant(validate_state(plus), z2));
}

TEST_CASE("extremal invariant structure for hamiltonians") {
  const AlgebraModel m3({3});
  const auto nd = extremal_invariant_states(Dynamics::hamiltonian(diag({0.0, 1.0, 2.5}), m3), m3);
  CHECK(nd.sectors.size() == 3);
  CHECK(nd.representatives.size() == 3);
  for (const auto& s : nd.sectors) CHECK(s.multiplicity == 1);

  const auto zero = extremal_invariant_states(Dynamics::hamiltonian(CMatrix::Zero(3, 3), m3), m3);
  REQUIRE(zero.sectors.size() == 1);
  CHECK(zero.sectors[0].multiplicity == 3);

  const auto deg = extremal_invariant_states(Dynamics::hamiltonian(diag({0.4, 0.4, 1.0}), m3), m3);
  REQUIRE(deg.sectors.size() == 2);
  CHECK(deg.sectors[0].multiplicity == 2);
  CHECK(deg.sectors[1].multiplicity == 1);
  CHECK(deg.sectors[0].energy < deg.sectors[1].energy);

  // Degenerate energies in different central blocks stay separate sectors.
  const AlgebraModel m11({1, 1});
  const auto split = extremal_invariant_states(Dynamics::hamiltonian(CMatrix::Zero(2, 2), m11), m11);
  CHECK(split.sectors.size() == 2);
}

TEST_CASE("extremal invariant structure for finite groups") {
  const AlgebraModel m2({2});
  const auto z2 = extremal_invariant_states(Dynamics::finite_group({pauli('i'), pauli('z')}, m2), m2);
  CHECK(z2.sectors.size() == 2);

  const auto irr = extremal_invariant_states(Dynamics::finite_group(pauli_group(), m2), m2);
  REQUIRE(irr.sectors.size() == 1);
  CHECK(irr.sectors[0].irrep_dim == 2);
  CHECK(irr.sectors[0].multiplicity == 1);
  REQUIRE(irr.representatives.size() == 1);
  CHECK(max_abs(irr.representatives[0].matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-10);

  // Pauli group on the first factor of C^2 (x) C^2: two copies of one irrep.
  const AlgebraModel m4({4});
  std::vector<CMatrix> us;
  for (const CMatrix& g : pauli_group()) us.push_back(kron(g, CMatrix::Identity(2, 2)));
  const Dynamics dyn = Dynamics::finite_group(us, m4);
  const auto two = extremal_invariant_states(dyn, m4);
  REQUIRE(two.sectors.size() == 1);
  CHECK(two.sectors[0].irrep_dim == 2);
  CHECK(two.sectors[0].multiplicity == 2);
  Rng rng(3);
  CVector v = gaussian_matrix(2, 1, rng).col(0);
  v.normalize();
  const DensityMatrix e = sector_state(two.sectors[0], v, m4);
  CHECK(is_invariant(e, dyn));
  CHECK(std::abs(e.purity() - 0.5) < 1e-10);
}

TEST_CASE("ergodic decomposition examples") {
  const AlgebraModel m3({3});
  const Dynamics nd = Dynamics::hamiltonian(diag({0.0, 1.0, 2.0}), m3);
  const ErgodicDecomposition a = ergodic_decompose(diag_state({0.2, 0.5, 0.3}), nd);
  REQUIRE(a.decomposition.size() == 3);
  CHECK(a.decomposition.weights[0] == doctest::Approx(0.5));
  CHECK(!a.has_degenerate_sector());
  for (const DensityMatrix& c : a.decomposition.components) {
    CHECK(is_invariant(c, nd));
    CHECK(c.purity() > 1 - 1e-9);
  }

  const Dynamics deg = Dynamics::hamiltonian(diag({0.0, 0.0, 1.0}), m3);
  const DensityMatrix rho = diag_state({0.25, 0.25, 0.5});
  const ErgodicDecomposition b = ergodic_decompose(rho, deg);
  CHECK(b.has_degenerate_sector());
  CHECK(b.decomposition.reconstruction_error(rho) < 1e-10);
  const std::vector<double> w = sorted_desc(b.decomposition.weights);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.25));
  for (const DensityMatrix& c : b.decomposition.components) CHECK(is_invariant(c, deg));

  CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  try {
    ergodic_decompose(validate_state(plus), Dynamics::hamiltonian(pauli('z'), AlgebraModel({2})));
    FAIL("expected NotInvariant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInvariant);
  }
}

TEST_CASE("property: ergodic weights are basis independent for nondegenerate H") {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + t % 3;
    const AlgebraModel alg({n});
    RVector e(n), p(n);
    for (int i = 0; i < n; ++i) e(i) = i + 0.3 * rng.uniform();
    for (int i = 0; i < n; ++i) p(i) = 0.1 + rng.uniform();
    p /= p.sum();
    const CMatrix w = random_unitary(n, rng);
    const CMatrix h = w * e.cast<cplx>().asDiagonal() * w.adjoint();
    const CMatrix r = w * p.cast<cplx>().asDiagonal() * w.adjoint();
    const ErgodicDecomposition d = ergodic_decompose(validate_state(r, alg), Dynamics::hamiltonian(h, alg));
    std::vector<double> want(p.data(), p.data() + n);
    want = sorted_desc(want);
    const std::vector<double> got = sorted_desc(d.decomposition.weights);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
  }
}

TEST_CASE("gibbs examples") {
  const AlgebraModel m3({3});
  CHECK(max_abs(gibbs_state(Dynamics::hamiltonian(CMatrix::Zero(3, 3), m3), 1.0, m3).matrix() -
                CMatrix::Identity(3, 3) / 3.0) < 1e-15);
  const AlgebraModel m2({2});
  const DensityMatrix g = gibbs_state(Dynamics::hamiltonian(diag({0.0, 1.0}), m2), 1.0, m2);
  const double z = 1.0 + std::exp(-1.0);
  CHECK(std::abs(g.matrix()(0, 0).real() - 1.0 / z) < 1e-15);
  CHECK(std::abs(g.matrix()(0, 0).real() - 0.73106) < 1e-5);
  const DensityMatrix cold = gibbs_state(Dynamics::hamiltonian(diag({0.0, 1.0}), m2), 50.0, m2);
  CHECK(max_abs(cold.matrix() - diag({1.0, 0.0})) < 1e-6);
}

TEST_CASE("extremal kms states") {
  const AlgebraModel m2({2});
  CHECK(extremal_kms_states(Dynamics::hamiltonian(pauli('z'), m2), 1.0, m2).size() == 1);
  const AlgebraModel m22({2, 2});
  const auto two = extremal_kms_states(Dynamics::hamiltonian(diag({0, 1, 0, 2}), m22), 1.0, m22);
  REQUIRE(two.size() == 2);
  CHECK(orthogonal_states(two[0], two[1]));
  const AlgebraModel m232({2, 3, 2});
  const auto three =
      extremal_kms_states(Dynamics::hamiltonian(diag({0, 1, 0, 1, 2, 0, 3}), m232), 0.5, m232);
  REQUIRE(three.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(orthogonal_states(three[i], three[j]));
}

TEST_CASE("kms decomposition examples") {
  const AlgebraModel m2({2});
  const Dynamics h2 = Dynamics::hamiltonian(diag({0.0, 1.0}), m2);
  const Decomposition one = kms_decompose(gibbs_state(h2, 2.0, m2), h2, 2.0);
  REQUIRE(one.size() == 1);
  CHECK(one.weights[0] == doctest::Approx(1.0));

  const AlgebraModel m22({2, 2});
  const Dynamics h = Dynamics::hamiltonian(diag({0, 1, 0, 2}), m22);
  const DensityMatrix rho = block_gibbs_mixture(m22, h, 1.0, {0.3, 0.7});
  CHECK(is_kms(rho, h, 1.0));
  const Decomposition d = kms_decompose(rho, h, 1.0);
  REQUIRE(d.size() == 2);
  CHECK(std::abs(d.weights[0] - 0.7) < 1e-12);
  CHECK(std::abs(d.weights[1] - 0.3) < 1e-12);
  const Decomposition again = kms_decompose(rho, h, 1.0);
  CHECK(again.weights == d.weights);

  const DensityMatrix mixed = validate_state(CMatrix::Identity(4, 4) / 4.0, m22);
  CHECK(!is_kms(mixed, h, 1.0));
  try {
    kms_decompose(mixed, h, 1.0);
    FAIL("expected NotKMS");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotKMS);
  }
}

TEST_CASE("gns examples") {
  const AlgebraModel m2({2});
  const Dynamics triv = Dynamics::trivial(m2);
  const GnsData faithful = gns_construct(m2, diag_state({0.6, 0.4}), triv);
  CHECK(faithful.rep_dim == 4);
  CHECK(max_abs(faithful.invariant_projection - CMatrix::Identity(4, 4)) < 1e-10);
  CHECK(!is_g_commutative(faithful, m2));

  const GnsData pure = gns_construct(m2, diag_state({1.0, 0.0}), triv);
  CHECK(pure.rep_dim == 2);
  CHECK(gns_reproduction_error(pure, diag_state({1.0, 0.0})) < 1e-12);

  const Dynamics hz = Dynamics::hamiltonian(diag({0.0, 1.0}), m2);
  const DensityMatrix g = gibbs_state(hz, 1.0, m2);
  const GnsData gd = gns_construct(m2, g, hz);
  CHECK(is_g_commutative(gd, m2));
  const CMatrix e = gd.invariant_projection;
  CHECK(max_abs(e * e - e) < 1e-10);
  CHECK(max_abs(e.adjoint() - e) < 1e-10);

  const AlgebraModel c1({1});
  const DensityMatrix one = validate_state(CMatrix::Identity(1, 1), c1);
  CHECK(is_g_commutative(gns_construct(c1, one, Dynamics::trivial(c1)), c1));

  CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  CHECK_THROWS_AS(gns_construct(m2, validate_state(plus), hz), Error);
}

TEST_CASE("property: gns reproduces the state on matrix units") {
  Rng rng(55);
  const std::vector<std::vector<int>> shapes{{1}, {2}, {3}, {1, 1}, {2, 1}, {2, 2}, {1, 3}, {4}, {5}, {2, 3}};
  for (int t = 0; t < 30; ++t) {
    const AlgebraModel alg(shapes[static_cast<std::size_t>(t) % shapes.size()]);
    const DensityMatrix rho = random_state(alg, rng, t % 2 ? 1 : 0);
    const GnsData g = gns_construct(alg, rho, Dynamics::trivial(alg));
    CHECK(gns_reproduction_error(g, rho) <= 1e-9);
    CHECK(std::abs(g.cyclic_vector.norm() - 1.0) < 1e-10);
  }
}
