#include <doctest.h>

#include "smix/error.hpp"
#include "smix/linalg.hpp"
#include "support.hpp"

using namespace smix;

TEST_CASE("jacobi diagonal input keeps values sorted descending") {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 0.2;
  m(1, 1) = 0.5;
  m(2, 2) = 0.3;
  const HermitianEigen e = jacobi_eigen(m);
  CHECK(e.values(0) == doctest::Approx(0.5));
  CHECK(e.values(1) == doctest::Approx(0.3));
  CHECK(e.values(2) == doctest::Approx(0.2));
}

TEST_CASE("jacobi 2x2 closed form") {
  CMatrix m(2, 2);
  m << 0.5, cplx(0.3, 0.1), cplx(0.3, -0.1), 0.5;
  const HermitianEigen e = jacobi_eigen(m);
  const double r = std::sqrt(0.3 * 0.3 + 0.1 * 0.1);
  CHECK(std::abs(e.values(0) - (0.5 + r)) < 1e-14);
  CHECK(std::abs(e.values(1) - (0.5 - r)) < 1e-14);
}

TEST_CASE("jacobi reconstructs random hermitian matrices") {
  Rng rng(7);
  for (int n = 1; n <= 12; ++n) {
    const CMatrix g = gaussian_matrix(n, n, rng);
    const CMatrix h = (g + g.adjoint()) / 2.0;
    const HermitianEigen e = jacobi_eigen(h);
    const CMatrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK(max_abs(back - h) < 1e-11);
    CHECK(max_abs(e.vectors.adjoint() * e.vectors - CMatrix::Identity(n, n)) < 1e-12);
    for (int i = 1; i < n; ++i) CHECK(e.values(i - 1) >= e.values(i));
    // trace and Frobenius norm are spectral invariants
    CHECK(std::abs(e.values.sum() - h.trace().real()) < 1e-11);
    CHECK(std::abs(e.values.squaredNorm() - h.squaredNorm()) < 1e-10);
  }
}

TEST_CASE("jacobi rejects non-square and reports the sweep cap") {
  CHECK_THROWS_AS(jacobi_eigen(CMatrix::Zero(2, 3)), Error);
  Rng rng(3);
  const CMatrix g = gaussian_matrix(6, 6, rng);
  try {
    jacobi_eigen((g + g.adjoint()) / 2.0, 1);
    FAIL("expected NotConverged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotConverged);
  }
}

TEST_CASE("orthonormalize and gaussian matrices are seed-deterministic") {
  Rng a(11), b(11);
  const CMatrix x = gaussian_matrix(5, 3, a), y = gaussian_matrix(5, 3, b);
  CHECK(max_abs(x - y) == 0.0);
  const CMatrix q = orthonormalize_columns(x);
  CHECK(max_abs(q.adjoint() * q - CMatrix::Identity(3, 3)) < 1e-14);
}

TEST_CASE("eigen clusters group near-equal values") {
  RVector v(5);
  v << 0.4, 0.4, 0.1, 0.1 - 1e-12, 0.0;
  const auto c = eigen_clusters(v, 1e-10);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::make_pair(Eigen::Index{0}, Eigen::Index{2}));
  CHECK(c[1] == std::make_pair(Eigen::Index{2}, Eigen::Index{4}));
  CHECK(c[2] == std::make_pair(Eigen::Index{4}, Eigen::Index{5}));
}

TEST_CASE("hermitian function exponentiates a diagonal") {
  CMatrix h = CMatrix::Zero(2, 2);
  h(1, 1) = 1.0;
  const CMatrix e = hermitian_function(h, [](double x) { return std::exp(-x); });
  CHECK(std::abs(e(0, 0).real() - 1.0) < 1e-15);
  CHECK(std::abs(e(1, 1).real() - std::exp(-1.0)) < 1e-15);
}
