#include "smix/states.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "smix/error.hpp"

namespace smix {

AlgebraModel::AlgebraModel(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw Error(ErrorKind::InvalidArgument, "algebra needs at least one block");
  for (int n : dims_) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "block dimensions must be >= 1");
    offsets_.push_back(total_);
    total_ += n;
  }
}

int AlgebraModel::block_of(int i) const {
  for (int b = num_blocks() - 1; b >= 0; --b)
    if (i >= offsets_[static_cast<std::size_t>(b)]) return b;
  throw Error(ErrorKind::InvalidArgument, "index outside algebra");
}

int AlgebraModel::linear_dim() const noexcept {
  int s = 0;
  for (int n : dims_) s += n * n;
  return s;
}

double AlgebraModel::off_block_norm(const CMatrix& m) const {
  double worst = 0.0;
  for (int j = 0; j < total_; ++j)
    for (int i = 0; i < total_; ++i)
      if (block_of(i) != block_of(j)) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

CMatrix AlgebraModel::block(const CMatrix& m, int b) const {
  return m.block(block_offset(b), block_offset(b), block_dim(b), block_dim(b));
}

CMatrix AlgebraModel::embed(const CMatrix& block_matrix, int b) const {
  CMatrix out = CMatrix::Zero(total_, total_);
  out.block(block_offset(b), block_offset(b), block_dim(b), block_dim(b)) = block_matrix;
  return out;
}

int SpectralData::rank() const {
  return static_cast<int>((eigenvalues.array() > kRankCutoff).count());
}

std::vector<double> SpectralData::eigenvalue_vector() const {
  return {eigenvalues.data(), eigenvalues.data() + eigenvalues.size()};
}

ProbDist SpectralData::as_distribution() const {
  std::vector<double> p = eigenvalue_vector();
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
  return ProbDist(std::move(p));
}

CMatrix SpectralData::reconstruct() const {
  return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

DensityMatrix validate_state(const CMatrix& m, const AlgebraModel& alg) {
  const int n = alg.total_dim();
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorKind::InvalidArgument,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ", algebra needs " + std::to_string(n) + "x" + std::to_string(n));
  if (hermiticity_defect(m) > kStateTolerance)
    throw Error(ErrorKind::NotHermitian, "max |m - m^dagger| exceeds 1e-10");
  if (alg.off_block_norm(m) != 0.0)
    throw Error(ErrorKind::BlockStructureViolated, "nonzero entry outside the diagonal blocks");
  CMatrix h = 0.5 * (m + m.adjoint());
  for (int i = 0; i < n; ++i) h(i, i) = h(i, i).real();
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > kStateTolerance)
    throw Error(ErrorKind::TraceNotOne, "trace is " + std::to_string(tr));
  const HermitianEigen e = jacobi_eigen(h);
  if (e.values(n - 1) < -kStateTolerance)
    throw Error(ErrorKind::NotPositive, "minimum eigenvalue " + std::to_string(e.values(n - 1)));
  return DensityMatrix(alg, std::move(h));
}

DensityMatrix validate_state(const CMatrix& m) {
  return validate_state(m, AlgebraModel::full_matrix(static_cast<int>(m.rows())));
}

DensityMatrix pure_state(const CVector& psi) {
  const double nrm = psi.norm();
  if (!(nrm > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero vector");
  const CVector u = psi / nrm;
  return validate_state(u * u.adjoint());
}

SpectralData schatten(const DensityMatrix& rho) {
  HermitianEigen e = jacobi_eigen(rho.matrix());
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) <= kRankCutoff) e.values(i) = 0.0;
  return SpectralData{std::move(e.values), std::move(e.vectors)};
}

bool majorizes(std::vector<double> p, std::vector<double> q, double slack) {
  const std::size_t n = std::max(p.size(), q.size());
  p.resize(n, 0.0);
  q.resize(n, 0.0);
  std::sort(p.begin(), p.end(), std::greater<>());
  std::sort(q.begin(), q.end(), std::greater<>());
  double sp = 0.0, sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sp += p[k];
    sq += q[k];
    if (sp < sq - slack) return false;
  }
  return true;
}

CMatrix support_projection(const DensityMatrix& rho) {
  const SpectralData s = schatten(rho);
  const int r = s.rank();
  const CMatrix v = s.eigenvectors.leftCols(r);
  return v * v.adjoint();
}

bool orthogonal_states(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (!(rho1.algebra() == rho2.algebra()))
    throw Error(ErrorKind::InvalidArgument, "states live on different algebras");
  return max_abs(support_projection(rho1) * support_projection(rho2)) <= 1e-9;
}

DensityMatrix tensor(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.algebra().num_blocks() != 1 || sigma.algebra().num_blocks() != 1)
    throw Error(ErrorKind::InvalidArgument, "tensor product needs single-block states");
  const CMatrix& a = rho.matrix();
  const CMatrix& b = sigma.matrix();
  CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return validate_state(k);
}

ProbDist block_weights(const DensityMatrix& rho) {
  const AlgebraModel& alg = rho.algebra();
  std::vector<double> w;
  for (int b = 0; b < alg.num_blocks(); ++b)
    w.push_back(std::max(0.0, alg.block(rho.matrix(), b).trace().real()));
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return ProbDist(std::move(w));
}

}  // namespace smix
