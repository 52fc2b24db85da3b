#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "metahom/errors.hpp"
#include "metahom/homogeneity.hpp"
#include "metahom/special_functions.hpp"

namespace metahom {

namespace {

constexpr double kBracket = 30.0;
constexpr double kScoreTolerance = 1e-10;
constexpr int kMaxIter = 200;

double log_choose(int n, int k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

// Noncentral hypergeometric support of X1 given the margin, with log
// base weights log C(n1, u) + log C(n0, X - u).
struct Stratum {
  int lo;
  int x1;
  std::vector<double> log_weight;
};

struct Moments {
  double score = 0.0;  // sum of x1 - E(X1 | X, beta)
  double info = 0.0;   // sum of var(X1 | X, beta)
};

Moments moments(const std::vector<Stratum>& strata, double beta) {
  Moments out;
  for (const auto& s : strata) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s.log_weight.size(); ++j)
      peak = std::max(peak, s.log_weight[j] + beta * (s.lo + double(j)));
    double z = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < s.log_weight.size(); ++j) {
      const double u = s.lo + double(j);
      const double w = std::exp(s.log_weight[j] + beta * u - peak);
      z += w;
      m1 += w * u;
      m2 += w * u * u;
    }
    const double mean = m1 / z;
    out.score += s.x1 - mean;
    out.info += std::max(0.0, m2 / z - mean * mean);
  }
  return out;
}

}  // namespace

double fit_conditional_mle(std::span<const StudyTable> studies) {
  std::vector<Stratum> strata;
  for (const auto& t : studies) {
    if (t.is_degenerate()) continue;
    const int X = t.total_events();
    Stratum s;
    s.lo = std::max(0, X - t.n0());
    const int hi = std::min(X, t.n1());
    s.x1 = t.x1();
    for (int u = s.lo; u <= hi; ++u)
      s.log_weight.push_back(log_choose(t.n1(), u) + log_choose(t.n0(), X - u));
    strata.push_back(std::move(s));
  }
  if (strata.empty())
    throw DegenerateDatasetError(
        "conditional MLE: every study has no events or all events");

  if (!(moments(strata, -kBracket).score > 0.0) ||
      !(moments(strata, kBracket).score < 0.0))
    throw SeparationError(
        "conditional MLE: score has no sign change on [-30, 30]");

  double lo = -kBracket;
  double hi = kBracket;
  double beta = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    const Moments mo = moments(strata, beta);
    if (std::fabs(mo.score) <= kScoreTolerance) return beta;
    if (mo.score > 0.0) {
      lo = beta;
    } else {
      hi = beta;
    }
    double next = mo.info > 0.0 ? beta + mo.score / mo.info : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-14 * (1.0 + std::fabs(beta))) return next;
    beta = next;
  }
  throw ConvergenceError("conditional MLE did not converge");
}

}  // namespace metahom
