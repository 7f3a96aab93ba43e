#include <doctest.h>

#include "smix/error.hpp"
#include "smix/states.hpp"
#include "support.hpp"

using namespace smix;
using smix::test::diag_state;
using smix::test::random_state;

namespace {
ErrorKind validation_kind(const CMatrix& m, const AlgebraModel& alg) {
  try {
    validate_state(m, alg);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("accepted an invalid state");
  return ErrorKind::InvalidArgument;
}

CVector ket(std::initializer_list<cplx> v) {
  CVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cplx z : v) x(i++) = z;
  return x;
}
}  // namespace

TEST_CASE("algebra model layout") {
  const AlgebraModel a({2, 3, 1});
  CHECK(a.total_dim() == 6);
  CHECK(a.num_blocks() == 3);
  CHECK(a.block_offset(2) == 5);
  CHECK(a.block_of(4) == 1);
  CHECK(a.linear_dim() == 4 + 9 + 1);
  CHECK_THROWS_AS(AlgebraModel({2, 0}), Error);
  CHECK_THROWS_AS(AlgebraModel(std::vector<int>{}), Error);
}

TEST_CASE("validate state examples and errors") {
  const AlgebraModel m2({2});
  const DensityMatrix half = validate_state(CMatrix::Identity(2, 2) / 2.0, m2);
  const SpectralData s = schatten(half);
  CHECK(s.eigenvalues(0) == doctest::Approx(0.5));
  CHECK(s.eigenvalues(1) == doctest::Approx(0.5));
  CHECK_NOTHROW(diag_state({0.7, 0.3}));

  CMatrix bad_trace = CMatrix::Zero(2, 2);
  bad_trace(0, 0) = 1.0;
  bad_trace(1, 1) = 0.1;
  CHECK(validation_kind(bad_trace, m2) == ErrorKind::TraceNotOne);

  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK(validation_kind(neg, m2) == ErrorKind::NotPositive);

  CMatrix nh = CMatrix::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.1;
  CHECK(validation_kind(nh, m2) == ErrorKind::NotHermitian);

  CMatrix off = CMatrix::Identity(4, 4) / 4.0;
  off(0, 2) = off(2, 0) = 0.01;
  CHECK(validation_kind(off, AlgebraModel({2, 2})) == ErrorKind::BlockStructureViolated);
  CHECK(validation_kind(CMatrix::Identity(3, 3) / 3.0, m2) == ErrorKind::InvalidArgument);
}

TEST_CASE("schatten examples") {
  const SpectralData a = schatten(diag_state({0.3, 0.7}));
  CHECK(a.eigenvalues(0) == doctest::Approx(0.7));
  CHECK(a.eigenvalues(1) == doctest::Approx(0.3));

  CMatrix m(2, 2);
  m << 0.5, 0.3, 0.3, 0.5;  // (I + 0.6 sx) / 2
  const SpectralData b = schatten(validate_state(m));
  CHECK(std::abs(b.eigenvalues(0) - 0.8) < 1e-14);
  CHECK(std::abs(b.eigenvalues(1) - 0.2) < 1e-14);

  const SpectralData c = schatten(pure_state(ket({1.0, cplx(0, 1)})));
  CHECK(c.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(c.eigenvalues(1) == 0.0);
  CHECK(c.rank() == 1);
}

TEST_CASE("property: schatten round trip up to dim 8") {
  Rng rng(5);
  for (int n = 1; n <= 8; ++n)
    for (int rank : {0, 1, 2}) {
      const DensityMatrix rho = random_state(AlgebraModel({n}), rng, rank);
      const SpectralData s = schatten(rho);
      CHECK(max_abs(s.reconstruct() - rho.matrix()) <= 1e-9);
      CHECK(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - CMatrix::Identity(n, n)) <= 1e-10);
      CHECK(std::abs(s.eigenvalues.sum() - 1.0) < 1e-12);
      for (int i = 1; i < n; ++i) CHECK(s.eigenvalues(i - 1) >= s.eigenvalues(i));
    }
}

TEST_CASE("majorization examples") {
  CHECK(majorizes({0.7, 0.3}, {0.5, 0.5}));
  CHECK(!majorizes({0.5, 0.5}, {0.7, 0.3}));
  CHECK(majorizes({0.6, 0.3, 0.1}, {0.6, 0.3, 0.1}));
  CHECK(majorizes({0.7, 0.3}, {0.4, 0.3, 0.3}));  // zero padding
  CHECK(majorizes({0.3, 0.7}, {0.5, 0.5}));       // unsorted input is sorted first
}

TEST_CASE("orthogonality examples") {
  CHECK(orthogonal_states(diag_state({1, 0}), diag_state({0, 1})));
  const DensityMatrix plus = pure_state(ket({1.0, 1.0}));
  CHECK(!orthogonal_states(plus, diag_state({1, 0})));
  const DensityMatrix f = diag_state({0.6, 0.4});
  CHECK(!orthogonal_states(f, f));
}

TEST_CASE("property: orthogonality is symmetric and matches overlaps for pure states") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 3;
    const CMatrix u = smix::test::random_unitary(n, rng);
    const DensityMatrix a = pure_state(u.col(0));
    const DensityMatrix b = pure_state(u.col(1));
    CHECK(orthogonal_states(a, b));
    CHECK(orthogonal_states(b, a));
    CHECK(std::abs(u.col(0).dot(u.col(1))) <= 1e-9);
    const DensityMatrix c = pure_state(u.col(0) + 0.1 * u.col(1));
    CHECK(orthogonal_states(a, c) == orthogonal_states(c, a));
    CHECK(!orthogonal_states(a, c));
  }
}

TEST_CASE("tensor examples") {
  const DensityMatrix h = validate_state(CMatrix::Identity(2, 2) / 2.0);
  CHECK(max_abs(tensor(h, h).matrix() - CMatrix::Identity(4, 4) / 4.0) < 1e-15);
  const DensityMatrix p = tensor(pure_state(ket({1.0, 2.0})), pure_state(ket({1.0, cplx(0, 1)})));
  CHECK(std::abs(p.purity() - 1.0) < 1e-12);
  const DensityMatrix d = tensor(diag_state({0.7, 0.3}), diag_state({0.5, 0.5}));
  const double want[] = {0.35, 0.35, 0.15, 0.15};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d.matrix()(i, i).real() - want[i]) < 1e-15);
  const DensityMatrix two = validate_state(CMatrix::Identity(2, 2) / 2.0, AlgebraModel({1, 1}));
  CHECK_THROWS_AS(tensor(two, h), Error);
}

TEST_CASE("property: tensor spectrum is the product of spectra") {
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix r = random_state(AlgebraModel({2 + t % 2}), rng);
    const DensityMatrix s = random_state(AlgebraModel({2}), rng);
    std::vector<double> want;
    for (double x : schatten(r).eigenvalue_vector())
      for (double y : schatten(s).eigenvalue_vector()) want.push_back(x * y);
    want = smix::test::sorted_desc(want);
    const std::vector<double> got = schatten(tensor(r, s)).eigenvalue_vector();
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-9);
  }
}

TEST_CASE("block weights") {
  CHECK(block_weights(diag_state({0.2, 0.8}))[0] == doctest::Approx(1.0));
  const AlgebraModel a({2, 2});
  CMatrix m = CMatrix::Zero(4, 4);
  m.diagonal() << 0.1, 0.15, 0.5, 0.25;
  const ProbDist w = block_weights(validate_state(m, a));
  CHECK(w[0] == doctest::Approx(0.25));
  CHECK(w[1] == doctest::Approx(0.75));
  m.diagonal() << 0.25, 0.25, 0.25, 0.25;
  const ProbDist e = block_weights(validate_state(m, a));
  CHECK(e[0] == doctest::Approx(0.5));
}
