#include "metahom/study.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "metahom/errors.hpp"

namespace metahom {

namespace {

constexpr double kUnitOddsTolerance = 1e-12;

}  // namespace

StudyTable::StudyTable(int x1, int n1, int x0, int n0, std::string label)
    : x1_(x1), n1_(n1), x0_(x0), n0_(n0), label_(std::move(label)) {
  if (n1 < 1 || n0 < 1)
    throw DomainError("study '" + label_ + "': arm sizes must be >= 1");
  if (x1 < 0 || x1 > n1 || x0 < 0 || x0 > n0)
    throw DomainError("study '" + label_ +
                      "': event counts must lie in [0, arm size]");
}

MetaDataset::MetaDataset(std::vector<StudyTable> studies)
    : studies_(std::move(studies)) {
  if (studies_.size() < 2)
    throw DomainError("m >= 2 required, got " +
                      std::to_string(studies_.size()) + " studies");
}

MetaDataset MetaDataset::swapped_arms() const {
  std::vector<StudyTable> out;
  out.reserve(studies_.size());
  for (const auto& s : studies_) out.push_back(s.swapped());
  return MetaDataset(std::move(out));
}

const char* to_string(CorrectionPolicy policy) noexcept {
  switch (policy) {
    case CorrectionPolicy::half: return "half";
    case CorrectionPolicy::none: return "none";
    case CorrectionPolicy::exclude: return "exclude";
  }
  return "?";
}

CorrectionPolicy parse_correction(const std::string& text) {
  if (text == "half") return CorrectionPolicy::half;
  if (text == "none") return CorrectionPolicy::none;
  if (text == "exclude") return CorrectionPolicy::exclude;
  throw DomainError("unknown correction policy '" + text +
                    "' (expected half, none or exclude)");
}

EffectEstimate log_odds_ratio(const StudyTable& t, CorrectionPolicy policy) {
  double a = t.x1();
  double b = t.n1() - t.x1();
  double c = t.x0();
  double d = t.n0() - t.x0();
  EffectEstimate est;
  if (t.has_zero_cell()) {
    if (policy != CorrectionPolicy::half)
      throw ZeroCellError("study '" + t.label() + "' has a zero cell");
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
    est.corrected = true;
  }
  est.log_or = (std::log(a) + std::log(d)) - (std::log(b) + std::log(c));
  est.se = std::sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
  return est;
}

double mh_pooled_or(std::span<const StudyTable> studies) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& t : studies) {
    const double n = t.total_size();
    num += static_cast<double>(t.x1()) * (t.n0() - t.x0()) / n;
    den += static_cast<double>(t.x0()) * (t.n1() - t.x1()) / n;
  }
  if (!(den > 0.0))
    throw DegenerateDatasetError(
        "Mantel-Haenszel odds ratio undefined: zero denominator");
  return num / den;
}

double conditional_expected_count(const StudyTable& t, double odds_ratio) {
  if (!(odds_ratio > 0.0) || !std::isfinite(odds_ratio))
    throw DomainError("conditional_expected_count: odds ratio must be "
                      "positive and finite");
  const double X = t.total_events();
  const double n1 = t.n1();
  const double n0 = t.n0();
  if (t.total_events() == 0) return 0.0;
  if (t.total_events() == t.total_size()) return n1;

  if (std::fabs(odds_ratio - 1.0) < kUnitOddsTolerance)
    return X * n1 / (n1 + n0);

  const double lo = std::max(0.0, X - n0);
  const double hi = std::min(X, n1);
  const double qa = odds_ratio - 1.0;
  const double qb = -((X + n1) * odds_ratio + (n0 - X));
  const double qc = X * n1 * odds_ratio;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0)
    throw NoAdmissibleRootError("conditional expectation: negative "
                                "discriminant");
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  const double roots[2] = {q / qa, qc / q};
  for (double r : roots) {
    if (r > lo && r < hi) return r;
  }
  throw NoAdmissibleRootError("conditional expectation: no root inside (" +
                              std::to_string(lo) + ", " + std::to_string(hi) +
                              ") for study '" + t.label() + "'");
}

double conditional_variance(const StudyTable& t, double e) {
  const double X = t.total_events();
  const double terms[4] = {e, X - e, t.n1() - e, t.n0() - X + e};
  double inv = 0.0;
  for (double v : terms) {
    if (!(v > 0.0))
      throw BoundaryError("conditional variance: expectation on the boundary "
                          "for study '" + t.label() + "'");
    inv += 1.0 / v;
  }
  return 1.0 / inv;
}

}  // namespace metahom
