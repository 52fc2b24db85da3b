#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "metahom/errors.hpp"
#include "metahom/homogeneity.hpp"

namespace metahom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeparationBound = 30.0;
constexpr int kMaxOuterIter = 100;
constexpr int kMaxInnerIter = 200;
constexpr double kScoreTolerance = 1e-10;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x)
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Intercept maximizing study i's likelihood for a fixed common effect.
// The score X - n1 s(a + beta) - n0 s(a) is strictly decreasing in a.
double solve_intercept(const StudyTable& t, double beta, double start) {
  if (t.total_events() == 0) return -kInf;
  if (t.total_events() == t.total_size()) return kInf;
  const double X = t.total_events();
  double a = std::isfinite(start) ? start : 0.0;
  double lo = -kInf;
  double hi = kInf;
  for (int it = 0; it < kMaxInnerIter; ++it) {
    const double p1 = sigmoid(a + beta);
    const double p0 = sigmoid(a);
    const double f = X - t.n1() * p1 - t.n0() * p0;
    if (f == 0.0) return a;
    if (f > 0.0) {
      lo = a;
    } else {
      hi = a;
    }
    const double info = t.n1() * p1 * (1.0 - p1) + t.n0() * p0 * (1.0 - p0);
    double step = info > 0.0 ? f / info : std::copysign(1.0, f);
    step = std::clamp(step, -5.0, 5.0);
    double next = a + step;
    if (!(next > lo && next < hi)) {
      next = (std::isfinite(lo) && std::isfinite(hi)) ? 0.5 * (lo + hi) : next;
    }
    if (std::fabs(next - a) <= 1e-14 * (1.0 + std::fabs(a))) return next;
    a = next;
  }
  throw ConvergenceError("intercept solve did not converge for study '" +
                         t.label() + "'");
}

double null_loglik(std::span<const StudyTable> studies,
                   const std::vector<double>& alphas, double beta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < studies.size(); ++i) {
    const auto& t = studies[i];
    const double a = alphas[i];
    if (!std::isfinite(a)) continue;  // limit contribution is 0
    ll += t.x1() * (a + beta) - t.n1() * softplus(a + beta);
    ll += t.x0() * a - t.n0() * softplus(a);
  }
  return ll;
}

double xlogy_ratio(double x, double n) {
  return x > 0.0 ? x * std::log(x / n) : 0.0;
}

}  // namespace

NullLogisticFit fit_null_logistic(std::span<const StudyTable> studies) {
  const bool any_informative =
      std::any_of(studies.begin(), studies.end(),
                  [](const StudyTable& t) { return !t.is_degenerate(); });
  if (!any_informative)
    throw DegenerateDatasetError(
        "null logistic fit: every study has no events or all events");

  NullLogisticFit fit;
  fit.alphas.assign(studies.size(), 0.0);
  for (std::size_t i = 0; i < studies.size(); ++i) {
    const auto& t = studies[i];
    fit.alphas[i] = std::log((t.x0() + 0.5) / (t.n0() - t.x0() + 0.5));
  }

  double beta = 0.0;
  {
    double num = 0.0, den = 0.0;
    for (const auto& t : studies) {
      num += (t.x1() + 0.5) * (t.n0() - t.x0() + 0.5) / t.total_size();
      den += (t.x0() + 0.5) * (t.n1() - t.x1() + 0.5) / t.total_size();
    }
    beta = std::clamp(std::log(num / den), -10.0, 10.0);
  }

  // The profile score is decreasing in beta; keep a bracket so Newton
  // steps that overshoot fall back to bisection.
  double lo = -kInf;
  double hi = kInf;
  for (int it = 1; it <= kMaxOuterIter; ++it) {
    double score = 0.0;
    double info = 0.0;
    for (std::size_t i = 0; i < studies.size(); ++i) {
      const auto& t = studies[i];
      fit.alphas[i] = solve_intercept(t, beta, fit.alphas[i]);
      if (!std::isfinite(fit.alphas[i])) continue;
      const double p1 = sigmoid(fit.alphas[i] + beta);
      const double p0 = sigmoid(fit.alphas[i]);
      const double w1 = t.n1() * p1 * (1.0 - p1);
      const double w0 = t.n0() * p0 * (1.0 - p0);
      score += t.x1() - t.n1() * p1;
      if (w1 + w0 > 0.0) info += w1 * w0 / (w1 + w0);
    }
    fit.iterations = it;
    if (std::fabs(score) <= kScoreTolerance) {
      fit.converged = true;
      break;
    }
    if (score > 0.0) {
      lo = beta;
    } else {
      hi = beta;
    }
    double step = info > 0.0 ? score / info : std::copysign(1.0, score);
    step = std::clamp(step, -2.0, 2.0);
    double next = beta + step;
    if (!(next > lo && next < hi) && std::isfinite(lo) && std::isfinite(hi))
      next = 0.5 * (lo + hi);
    if (std::fabs(next) > kSeparationBound)
      throw SeparationError(
          "null logistic fit: common effect diverges (quasi-separation)");
    if (std::fabs(next - beta) <= 1e-15 * (1.0 + std::fabs(beta))) {
      beta = next;
      fit.converged = true;
      break;
    }
    beta = next;
  }
  if (!fit.converged)
    throw ConvergenceError("null logistic fit did not converge in " +
                           std::to_string(kMaxOuterIter) + " iterations");

  for (std::size_t i = 0; i < studies.size(); ++i)
    fit.alphas[i] = solve_intercept(studies[i], beta, fit.alphas[i]);
  fit.beta = beta;
  fit.loglik = null_loglik(studies, fit.alphas, beta);
  return fit;
}

double saturated_loglik(std::span<const StudyTable> studies) {
  double ll = 0.0;
  for (const auto& t : studies) {
    ll += xlogy_ratio(t.x1(), t.n1()) + xlogy_ratio(t.n1() - t.x1(), t.n1());
    ll += xlogy_ratio(t.x0(), t.n0()) + xlogy_ratio(t.n0() - t.x0(), t.n0());
  }
  return ll;
}

}  // namespace metahom
