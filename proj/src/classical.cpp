#include "smix/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smix/error.hpp"

namespace smix {

namespace {

void check_beta(double beta) {
  if (!std::isfinite(beta) || beta <= -1.0 || beta == 0.0)
    throw Error(ErrorKind::InvalidArgument,
                "coding parameter beta must satisfy beta > -1 and beta != 0, got " +
                    std::to_string(beta));
}

}  // namespace

ProbDist::ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorKind::InvalidDistribution, "empty distribution");
  double sum = 0.0;
  for (double x : probs_) {
    if (!std::isfinite(x) || x < 0.0)
      throw Error(ErrorKind::InvalidDistribution, "entries must be finite and nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance)
    throw Error(ErrorKind::InvalidDistribution,
                "entries sum to " + std::to_string(sum) + ", expected 1");
  for (double& x : probs_) x /= sum;
}

ProbDist ProbDist::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidDistribution, "empty distribution");
  return ProbDist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t ProbDist::support_size() const noexcept {
  std::size_t k = 0;
  for (double x : probs_) k += x > 0.0 ? 1 : 0;
  return k;
}

Alpha::Alpha(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0)
    throw Error(ErrorKind::InvalidArgument, "alpha must be finite and >= 0");
}

double CodeSpec::kraft_sum() const {
  double s = 0.0;
  for (const auto& l : lengths)
    if (l) s += std::exp2(-static_cast<double>(*l));
  return s;
}

double renyi_classical(const ProbDist& p, Alpha a) {
  if (a.is_shannon())
    throw Error(ErrorKind::InvalidArgument, "alpha = 1 is the Shannon limit; use shannon()");
  if (a.value() == 0.0) return std::log2(static_cast<double>(p.support_size()));
  double s = 0.0;
  for (double x : p.probs())
    if (x > 0.0) s += std::pow(x, a.value());
  return std::log2(s) / (1.0 - a.value());
}

double shannon(const ProbDist& p) {
  double h = 0.0;
  for (double x : p.probs())
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double renyi_or_shannon(const ProbDist& p, Alpha a) {
  return a.is_shannon() ? shannon(p) : renyi_classical(p, a);
}

std::pair<double, double> renyi_limit_check(const ProbDist& p, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  return {renyi_classical(p, Alpha(1.0 - eps)), renyi_classical(p, Alpha(1.0 + eps))};
}

ProbDist product_dist(const ProbDist& p, const ProbDist& q) {
  std::vector<double> joint;
  joint.reserve(p.size() * q.size());
  for (double x : p.probs())
    for (double y : q.probs()) joint.push_back(x * y);
  return ProbDist(std::move(joint));
}

double coding_cost(const ProbDist& p, const CodeSpec& code) {
  check_beta(code.beta);
  if (code.lengths.size() != p.size())
    throw Error(ErrorKind::InvalidArgument, "code has " + std::to_string(code.lengths.size()) +
                                                " lengths for " + std::to_string(p.size()) +
                                                " symbols");
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    if (!code.lengths[x])
      throw Error(ErrorKind::InvalidArgument,
                  "symbol " + std::to_string(x) + " has positive probability but no codeword");
    s += p[x] * std::exp2(code.beta * static_cast<double>(*code.lengths[x]));
  }
  return std::log2(s) / code.beta;
}

CodeSpec build_campbell_code(const ProbDist& p, double beta) {
  check_beta(beta);
  const double alpha = campbell_alpha(beta);
  double norm = 0.0;
  for (double x : p.probs())
    if (x > 0.0) norm += std::pow(x, alpha);
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidDistribution, "distribution has no mass");

  CodeSpec code;
  code.beta = beta;
  code.lengths.resize(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    const double escort = std::pow(p[x], alpha) / norm;
    // Absorb roundoff so exact powers of two map to their integer length.
    const double ideal = -std::log2(escort);
    code.lengths[x] = std::max(0, static_cast<int>(std::ceil(ideal - 1e-12)));
  }
  return code;
}

}  // namespace smix
