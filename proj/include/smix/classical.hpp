#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace smix {

/// Tolerance on |sum p - 1| accepted before exact renormalization.
constexpr double kProbSumTolerance = 1e-12;

/// Finite probability vector. Zero entries are allowed and are skipped in
/// every power sum (0^alpha = 0, 0 log 0 = 0).
class ProbDist {
 public:
  /// Throws Error(InvalidDistribution) on negative/non-finite entries, an
  /// empty vector, or a sum further than kProbSumTolerance from 1.
  explicit ProbDist(std::vector<double> probs);

  static ProbDist uniform(std::size_t n);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t support_size() const noexcept;

 private:
  std::vector<double> probs_;
};

/// Renyi order. alpha == 1 is representable and selects the Shannon /
/// von Neumann branch wherever a function accepts it.
class Alpha {
 public:
  explicit Alpha(double value);
  double value() const noexcept { return value_; }
  bool is_shannon() const noexcept { return value_ == 1.0; }

 private:
  double value_;
};

/// Binary code lengths plus the exponential-cost parameter. Symbols with
/// zero probability may carry no codeword.
struct CodeSpec {
  std::vector<std::optional<int>> lengths;
  double beta = 1.0;

  /// Sum of 2^-l over assigned codewords.
  double kraft_sum() const;
  bool satisfies_kraft(double slack = 1e-12) const { return kraft_sum() <= 1.0 + slack; }
};

/// (1 - alpha)^-1 log2 sum p^alpha; alpha == 0 gives log2 of the support size.
/// Rejects alpha == 1.
double renyi_classical(const ProbDist& p, Alpha a);

/// -sum p log2 p.
double shannon(const ProbDist& p);

/// Renyi entropy for alpha != 1 and Shannon entropy at alpha == 1.
double renyi_or_shannon(const ProbDist& p, Alpha a);

/// (S_{1-eps}, S_{1+eps}); requires 0 < eps < 1.
std::pair<double, double> renyi_limit_check(const ProbDist& p, double eps);

/// Joint distribution of independent p and q, index i * |q| + j.
ProbDist product_dist(const ProbDist& p, const ProbDist& q);

/// L_beta(C) = beta^-1 log2 sum p(x) 2^(beta l(x)).
double coding_cost(const ProbDist& p, const CodeSpec& code);

/// Code of the Campbell type: lengths ceil(-log2 q(x)) for the escort
/// distribution q ~ p^alpha, alpha = 1 / (1 + beta).
CodeSpec build_campbell_code(const ProbDist& p, double beta);

/// alpha = 1 / (1 + beta) paired with a coding parameter.
inline double campbell_alpha(double beta) { return 1.0 / (1.0 + beta); }

}  // namespace smix
