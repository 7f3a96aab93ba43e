#include "smix/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "smix/error.hpp"

namespace smix {

namespace {

constexpr double kWeightCutoff = 1e-12;
constexpr double kMergeFidelity = 1.0 - 1e-10;

/// Rank-r Schatten data with the central block of each eigenvector.
struct SchattenFrame {
  RVector p;
  CMatrix x;
  std::vector<int> col_block;
  int rank = 0;
};

SchattenFrame make_frame(const DensityMatrix& rho) {
  const SpectralData s = schatten(rho);
  const AlgebraModel& alg = rho.algebra();
  SchattenFrame f;
  f.rank = s.rank();
  f.p = s.eigenvalues.head(f.rank);
  f.x = s.eigenvectors.leftCols(f.rank);
  for (int j = 0; j < f.rank; ++j) {
    int best = 0;
    double best_norm = -1.0;
    for (int b = 0; b < alg.num_blocks(); ++b) {
      const double nrm = f.x.col(j).segment(alg.block_offset(b), alg.block_dim(b)).squaredNorm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = b;
      }
    }
    f.col_block.push_back(best);
  }
  return f;
}

/// Block touched by each row of U; -1 for an all-zero row.
std::vector<int> row_blocks(const CMatrix& u, const SchattenFrame& f) {
  std::vector<int> out(static_cast<std::size_t>(u.rows()), -1);
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const double w = std::norm(u(k, j));
      if (w > best) {
        best = w;
        out[static_cast<std::size_t>(k)] = f.col_block[static_cast<std::size_t>(j)];
      }
    }
  }
  return out;
}

/// Per-component contribution to the search objective. For alpha = 0 the
/// Shannon term steers toward fewer components.
struct Objective {
  double alpha;
  bool additive;  // Shannon-type: value is the plain sum

  explicit Objective(Alpha a)
      : alpha(a.value()), additive(a.is_shannon() || a.value() == 0.0) {}

  double term(double x) const {
    if (x <= 0.0) return 0.0;
    return additive ? -x * std::log2(x) : std::pow(x, alpha);
  }
  double value(double sum) const { return additive ? sum : std::log2(sum) / (1.0 - alpha); }
};

double objective_value(const CMatrix& w, const Objective& obj) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < w.rows(); ++k) s += obj.term(w.row(k).squaredNorm());
  return obj.value(s);
}

/// Best rotation of rows k, l of W. Returns true if the objective improved.
bool pair_move(CMatrix& w, Eigen::Index k, Eigen::Index l, const Objective& obj) {
  const double a = w.row(k).squaredNorm();
  const double b = w.row(l).squaredNorm();
  const cplx g = w.row(k).dot(w.row(l));  // sum conj(w_k) w_l
  const double gabs = std::abs(g);
  if (gabs <= 1e-15 * (a + b)) return false;

  // Phase move: make the overlap real and positive.
  const CVector rk = w.row(k).transpose();
  const CVector rl = (w.row(l) * (std::conj(g) / gabs)).transpose();

  double rest = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    if (i != k && i != l) rest += obj.term(w.row(i).squaredNorm());

  auto eval = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double lk = (c * rk + s * rl).squaredNorm();
    const double ll = (-s * rk + c * rl).squaredNorm();
    return obj.value(rest + obj.term(lk) + obj.term(ll));
  };

  constexpr int kGrid = 16;
  constexpr double kStep = std::numbers::pi / kGrid;
  int best_i = 0;
  double best_f = eval(0.0);
  const double f0 = best_f;
  for (int i = 1; i < kGrid; ++i) {
    const double f = eval(i * kStep);
    if (f < best_f) {
      best_f = f;
      best_i = i;
    }
  }
  // Golden-section search on the bracket around the best grid point.
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = (best_i - 1) * kStep, hi = (best_i + 1) * kStep;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = eval(x2);
    }
  }
  double theta = best_i * kStep;
  if (f1 < best_f) {
    best_f = f1;
    theta = x1;
  }
  if (f2 < best_f) {
    best_f = f2;
    theta = x2;
  }
  if (!(best_f < f0)) return false;

  const double c = std::cos(theta), s = std::sin(theta);
  w.row(k) = (c * rk + s * rl).transpose();
  w.row(l) = (-s * rk + c * rl).transpose();
  return true;
}

bool better(const SearchResult& lhs, const SearchResult& rhs) {
  if (std::abs(lhs.value - rhs.value) > 1e-12) return lhs.value < rhs.value;
  if (lhs.decomposition.size() != rhs.decomposition.size())
    return lhs.decomposition.size() < rhs.decomposition.size();
  return std::lexicographical_compare(lhs.decomposition.weights.begin(),
                                      lhs.decomposition.weights.end(),
                                      rhs.decomposition.weights.begin(),
                                      rhs.decomposition.weights.end());
}

}  // namespace

CMatrix Decomposition::mixture() const {
  if (components.empty()) return {};
  CMatrix m = CMatrix::Zero(components.front().dim(), components.front().dim());
  for (std::size_t k = 0; k < size(); ++k) m += weights[k] * components[k].matrix();
  return m;
}

double Decomposition::reconstruction_error(const DensityMatrix& rho) const {
  return max_abs(mixture() - rho.matrix());
}

bool Decomposition::all_pure(double tol) const {
  return std::all_of(components.begin(), components.end(),
                     [tol](const DensityMatrix& c) { return c.purity() >= 1.0 - tol; });
}

void Decomposition::sort_by_weight() {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return weights[i] > weights[j]; });
  std::vector<double> w;
  std::vector<DensityMatrix> c;
  for (std::size_t i : order) {
    w.push_back(weights[i]);
    c.push_back(components[i]);
  }
  weights = std::move(w);
  components = std::move(c);
}

IsometryParam::IsometryParam(CMatrix u) : u_(std::move(u)) {
  if (u_.cols() > u_.rows())
    throw Error(ErrorKind::NotOrthonormal, "isometry needs at least as many rows as columns");
  const CMatrix gram = u_.adjoint() * u_;
  if (max_abs(gram - CMatrix::Identity(u_.cols(), u_.cols())) > 1e-10)
    throw Error(ErrorKind::NotOrthonormal, "isometry columns are not orthonormal");
}

IsometryParam IsometryParam::identity(Eigen::Index m, Eigen::Index r) {
  return IsometryParam(CMatrix::Identity(m, r));
}

double weight_functional(std::span<const double> weights, Alpha a) {
  if (a.is_shannon()) {
    double h = 0.0;
    for (double w : weights)
      if (w > 0.0) h -= w * std::log2(w);
    return h;
  }
  if (a.value() == 0.0) {
    const auto n = std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
    return std::log2(static_cast<double>(n));
  }
  double s = 0.0;
  for (double w : weights)
    if (w > 0.0) s += std::pow(w, a.value());
  return std::log2(s) / (1.0 - a.value());
}

double smix_weight_value(const Decomposition& d, Alpha a) {
  return weight_functional(d.weights, a);
}

Decomposition decomposition_from_isometry(const DensityMatrix& rho, const IsometryParam& u) {
  const SchattenFrame f = make_frame(rho);
  if (u.cols() != f.rank)
    throw Error(ErrorKind::RankMismatch, "isometry has " + std::to_string(u.cols()) +
                                             " columns, state has rank " +
                                             std::to_string(f.rank));
  const AlgebraModel& alg = rho.algebra();
  const std::vector<int> blocks = row_blocks(u.matrix(), f);

  // Columns of psi are the unnormalized component vectors.
  const CMatrix psi = f.x * f.p.cwiseSqrt().cast<cplx>().asDiagonal() * u.matrix().transpose();

  Decomposition d;
  std::vector<CVector> unit_vectors;
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const int b = blocks[static_cast<std::size_t>(k)];
    if (b < 0) continue;
    double stray = 0.0;
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      if (f.col_block[static_cast<std::size_t>(j)] != b) stray += std::norm(u.matrix()(k, j)) * f.p(j);
    if (stray > 1e-14)
      throw Error(ErrorKind::BlockStructureViolated,
                  "isometry row " + std::to_string(k) + " mixes central blocks");

    CVector v = CVector::Zero(alg.total_dim());
    v.segment(alg.block_offset(b), alg.block_dim(b)) =
        psi.col(k).segment(alg.block_offset(b), alg.block_dim(b));
    const double weight = v.squaredNorm();
    if (weight < kWeightCutoff) continue;
    v /= std::sqrt(weight);

    bool merged = false;
    for (std::size_t i = 0; i < unit_vectors.size(); ++i) {
      if (std::norm(unit_vectors[i].dot(v)) >= kMergeFidelity) {
        d.weights[i] += weight;
        merged = true;
        break;
      }
    }
    if (merged) continue;
    unit_vectors.push_back(v);
    d.weights.push_back(weight);
    d.components.push_back(validate_state(v * v.adjoint(), alg));
  }
  d.sort_by_weight();
  return d;
}

int component_cap(int rank, const SearchBudget& budget) {
  const int automatic = rank * rank + 1;
  return budget.m_cap > 0 ? std::max(rank, budget.m_cap) : automatic;
}

IsometryParam random_isometry(const DensityMatrix& rho, int m, Rng& rng) {
  const SchattenFrame f = make_frame(rho);
  if (m < f.rank)
    throw Error(ErrorKind::RankMismatch, "need at least rank(rho) = " + std::to_string(f.rank) +
                                             " components, got " + std::to_string(m));
  const int nblocks = rho.algebra().num_blocks();
  std::vector<std::vector<Eigen::Index>> cols(static_cast<std::size_t>(nblocks));
  for (int j = 0; j < f.rank; ++j) cols[static_cast<std::size_t>(f.col_block[static_cast<std::size_t>(j)])].push_back(j);

  std::vector<int> rows_per_block(static_cast<std::size_t>(nblocks), 0);
  std::vector<int> active;
  for (int b = 0; b < nblocks; ++b) {
    rows_per_block[static_cast<std::size_t>(b)] = static_cast<int>(cols[static_cast<std::size_t>(b)].size());
    if (rows_per_block[static_cast<std::size_t>(b)] > 0) active.push_back(b);
  }
  for (int extra = 0; extra < m - f.rank; ++extra)
    ++rows_per_block[static_cast<std::size_t>(active[static_cast<std::size_t>(extra) % active.size()])];

  CMatrix u = CMatrix::Zero(m, f.rank);
  Eigen::Index row = 0;
  for (int b : active) {
    const auto& bc = cols[static_cast<std::size_t>(b)];
    const int mb = rows_per_block[static_cast<std::size_t>(b)];
    const CMatrix q =
        orthonormalize_columns(gaussian_matrix(mb, static_cast<Eigen::Index>(bc.size()), rng));
    for (std::size_t c = 0; c < bc.size(); ++c) u.block(row, bc[c], mb, 1) = q.col(static_cast<Eigen::Index>(c));
    row += mb;
  }
  return IsometryParam(std::move(u));
}

std::vector<Decomposition> sample_decompositions(const DensityMatrix& rho, int m, int n_samples,
                                                 std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "n_samples must be >= 1");
  const int r = schatten(rho).rank();
  if (m < r)
    throw Error(ErrorKind::RankMismatch, "need at least rank(rho) = " + std::to_string(r) +
                                             " components, got " + std::to_string(m));
  std::vector<Decomposition> out;
  out.push_back(decomposition_from_isometry(rho, IsometryParam::identity(m, r)));
  for (int i = 1; i < n_samples; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    out.push_back(decomposition_from_isometry(rho, random_isometry(rho, m, rng)));
  }
  return out;
}

SearchResult refine_isometry(const DensityMatrix& rho, Alpha a, const IsometryParam& start,
                             int max_sweeps) {
  const SchattenFrame f = make_frame(rho);
  if (start.cols() != f.rank)
    throw Error(ErrorKind::RankMismatch, "isometry column count differs from rank");
  std::vector<int> blocks = row_blocks(start.matrix(), f);
  {
    // Zero rows may pair with any active block; give them one deterministically.
    std::vector<int> active(f.col_block.begin(), f.col_block.end());
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    std::size_t next = 0;
    for (int& b : blocks)
      if (b < 0 && !active.empty()) b = active[next++ % active.size()];
  }

  const Objective obj(a);
  CMatrix w = start.matrix() * f.p.cwiseSqrt().cast<cplx>().asDiagonal();
  double current = objective_value(w, obj);
  SearchResult res;
  for (; res.sweeps < max_sweeps; ++res.sweeps) {
    const double prev = current;
    for (Eigen::Index k = 0; k < w.rows(); ++k)
      for (Eigen::Index l = k + 1; l < w.rows(); ++l)
        if (blocks[static_cast<std::size_t>(k)] == blocks[static_cast<std::size_t>(l)])
          pair_move(w, k, l, obj);
    current = objective_value(w, obj);
    if (prev - current <= 1e-10 * std::abs(prev)) {
      res.converged = true;
      ++res.sweeps;
      break;
    }
  }
  CMatrix u = w * f.p.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal();
  // Rotations keep orthonormality up to roundoff; clean it before validation.
  u = orthonormalize_columns(u);
  res.decomposition = decomposition_from_isometry(rho, IsometryParam(std::move(u)));
  res.value = smix_weight_value(res.decomposition, a);
  res.restarts = 1;
  return res;
}

SearchResult minimize_weight_functional(const DensityMatrix& rho, Alpha a,
                                        const SearchBudget& budget) {
  if (budget.restarts < 1) throw Error(ErrorKind::InvalidArgument, "restarts must be >= 1");
  const int r = schatten(rho).rank();
  if (r == 1) {
    SearchResult res;
    res.decomposition = decomposition_from_isometry(rho, IsometryParam::identity(1, 1));
    res.value = smix_weight_value(res.decomposition, a);
    res.converged = true;
    res.restarts = 0;
    return res;
  }
  const int cap = component_cap(r, budget);
  SearchResult best;
  bool have = false;
  bool all_converged = true;
  for (int i = 0; i < budget.restarts; ++i) {
    Rng rng = Rng::stream(budget.seed, static_cast<std::uint64_t>(i));
    const int m = r + i % (cap - r + 1);
    SearchResult res = refine_isometry(rho, a, random_isometry(rho, m, rng), budget.iterations);
    all_converged = all_converged && res.converged;
    if (!have || better(res, best)) {
      best = std::move(res);
      have = true;
    }
  }
  best.restarts = budget.restarts;
  best.converged = all_converged;
  return best;
}

}  // namespace smix
