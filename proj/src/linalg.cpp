#include "smix/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smix/error.hpp"

namespace smix {

namespace {

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

HermitianEigen jacobi_eigen(const CMatrix& m, int max_sweeps) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::InvalidArgument, "jacobi_eigen: matrix is not square");
  const Eigen::Index n = m.rows();
  CMatrix a = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  CMatrix v = CMatrix::Identity(n, n);

  const double tol = kJacobiTolerance * std::max(1.0, a.norm());
  int sweep = 0;
  for (; off_diagonal_norm(a) > tol; ++sweep) {
    if (sweep >= max_sweeps)
      throw Error(ErrorKind::NotConverged, "Jacobi eigensolver exceeded sweep cap");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double b = std::abs(apq);
        if (b == 0.0) continue;
        // Phase on q makes a(p,q) real; then a real symmetric rotation.
        const cplx phase = std::conj(apq) / b;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * b);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, phase) * [[c, s], [-s, c]]
        const cplx jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m) { return max_abs(m - m.adjoint()); }

CMatrix orthonormalize_columns(CMatrix m) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const cplx proj = m.col(i).dot(m.col(j));
        m.col(j) -= proj * m.col(i);
      }
      const double nrm = m.col(j).norm();
      if (nrm > 0.0) m.col(j) /= nrm;
    }
  }
  return m;
}

CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cplx(re, im);
    }
  return g;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> eigen_clusters(const RVector& descending,
                                                                  double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= descending.size(); ++i) {
    if (i == descending.size() || descending(i - 1) - descending(i) > tol) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

}  // namespace smix
