#include "metahom/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "metahom/errors.hpp"
#include "metahom/special_functions.hpp"

namespace metahom {

const char* to_string(TestName name) noexcept {
  switch (name) {
    case TestName::BDT: return "BDT";
    case TestName::BLISS: return "BLISS";
    case TestName::LIANG_SELF: return "LIANG_SELF";
    case TestName::LRT: return "LRT";
    case TestName::PETO: return "PETO";
    case TestName::Q: return "Q";
    case TestName::WOOLF: return "WOOLF";
    case TestName::ZELEN: return "ZELEN";
  }
  return "?";
}

const char* display_name(TestName name) noexcept {
  return name == TestName::LIANG_SELF ? "LIANG & SELF" : to_string(name);
}

TestResult TestResult::success(TestName name, double statistic, int df) {
  TestResult r;
  r.test_name = name;
  r.statistic = statistic;
  r.df = df;
  r.p_value = chi_square_sf(statistic, df);
  r.status = TestStatus::ok;
  return r;
}

TestResult TestResult::failure(TestName name, int df, std::string reason) {
  TestResult r;
  r.test_name = name;
  r.statistic = std::numeric_limits<double>::quiet_NaN();
  r.df = df;
  r.p_value = std::numeric_limits<double>::quiet_NaN();
  r.status = TestStatus::failed;
  r.reason = std::move(reason);
  return r;
}

namespace {

struct LogOddsSet {
  std::vector<double> beta;
  std::vector<double> weight;  // 1 / se^2
};

LogOddsSet collect_log_odds(const MetaDataset& ds, CorrectionPolicy policy) {
  LogOddsSet out;
  for (const auto& t : ds.studies()) {
    if (policy == CorrectionPolicy::half && t.is_degenerate()) continue;
    if (policy == CorrectionPolicy::exclude && t.has_zero_cell()) continue;
    const EffectEstimate e = log_odds_ratio(t, policy);
    out.beta.push_back(e.log_or);
    out.weight.push_back(1.0 / (e.se * e.se));
  }
  if (out.beta.size() < 2)
    throw DegenerateDatasetError(
        "fewer than two studies with a finite log odds ratio");
  return out;
}

double q_value(const LogOddsSet& s) {
  double sw = 0.0, swb = 0.0;
  for (std::size_t i = 0; i < s.beta.size(); ++i) {
    sw += s.weight[i];
    swb += s.weight[i] * s.beta[i];
  }
  const double center = swb / sw;
  double q = 0.0;
  for (std::size_t i = 0; i < s.beta.size(); ++i) {
    const double d = s.beta[i] - center;
    q += s.weight[i] * d * d;
  }
  return q;
}

double mean_dof(const MetaDataset& ds) {
  double sum = 0.0;
  for (const auto& t : ds.studies()) sum += t.total_size() - 2.0;
  return sum / static_cast<double>(ds.size());
}

}  // namespace

double bliss_statistic(double q, int m, double mean_dof) {
  if (!(mean_dof > 4.0))
    throw DomainError("Bliss statistic needs mean study dof > 4, got " +
                      std::to_string(mean_dof));
  const double k = m - 1.0;
  const double scale = std::sqrt((mean_dof - 4.0) / (mean_dof - 1.0));
  const double t3 = k + scale * ((mean_dof - 2.0) * q / mean_dof - k);
  return std::max(0.0, t3);
}

PetoTerms peto_stratum(const StudyTable& t) {
  const double X = t.total_events();
  const double n = t.total_size();
  const double n1 = t.n1();
  const double n0 = t.n0();
  return {t.x1() - X * n1 / n,
          X * (n - X) * n1 * n0 / (n * n * (n - 1.0))};
}

double score_homogeneity_statistic(const MetaDataset& ds, double odds_ratio,
                                   bool tarone_adjust) {
  double sum = 0.0;
  double resid = 0.0;
  double var_sum = 0.0;
  int used = 0;
  for (const auto& t : ds.studies()) {
    if (t.is_degenerate()) continue;
    const double e = conditional_expected_count(t, odds_ratio);
    const double v = conditional_variance(t, e);
    const double d = t.x1() - e;
    sum += d * d / v;
    resid += d;
    var_sum += v;
    ++used;
  }
  if (used == 0)
    throw DegenerateDatasetError(
        "score test: every study has no events or all events");
  if (tarone_adjust) sum -= resid * resid / var_sum;
  return std::max(0.0, sum);
}

TestResult lrt(const MetaDataset& ds) {
  try {
    const NullLogisticFit fit = fit_null_logistic(ds);
    const double t1 = -2.0 * (fit.loglik - saturated_loglik(ds));
    return TestResult::success(TestName::LRT, std::max(0.0, t1), ds.df());
  } catch (const Error& e) {
    return TestResult::failure(TestName::LRT, ds.df(), e.what());
  }
}

TestResult q_statistic(const MetaDataset& ds, CorrectionPolicy policy) {
  return TestResult::success(TestName::Q, q_value(collect_log_odds(ds, policy)),
                             ds.df());
}

TestResult bliss(const MetaDataset& ds, CorrectionPolicy policy) {
  const double q = q_value(collect_log_odds(ds, policy));
  return TestResult::success(
      TestName::BLISS,
      bliss_statistic(q, static_cast<int>(ds.size()), mean_dof(ds)), ds.df());
}

TestResult woolf(const MetaDataset& ds, CorrectionPolicy policy) {
  const LogOddsSet s = collect_log_odds(ds, policy);
  double sum_sq = 0.0, sum_wb = 0.0, sum_w = 0.0;
  for (std::size_t i = 0; i < s.beta.size(); ++i) {
    sum_sq += s.beta[i] * s.beta[i] * s.weight[i];
    sum_wb += s.beta[i] * s.weight[i];
    sum_w += s.weight[i];
  }
  const double t7 = sum_sq - sum_wb * sum_wb / sum_w;
  return TestResult::success(TestName::WOOLF, std::max(0.0, t7), ds.df());
}

TestResult breslow_day_tarone(const MetaDataset& ds) {
  const double odds = mh_pooled_or(ds);
  if (!(odds > 0.0))
    throw DegenerateDatasetError(
        "Mantel-Haenszel odds ratio is zero; conditional moments undefined");
  return TestResult::success(TestName::BDT,
                             score_homogeneity_statistic(ds, odds, true),
                             ds.df());
}

TestResult zelen(const MetaDataset& ds) {
  const NullLogisticFit fit = fit_null_logistic(ds);
  return TestResult::success(
      TestName::ZELEN,
      score_homogeneity_statistic(ds, std::exp(fit.beta), false), ds.df());
}

TestResult liang_self(const MetaDataset& ds) {
  const double beta = fit_conditional_mle(ds);
  return TestResult::success(
      TestName::LIANG_SELF,
      score_homogeneity_statistic(ds, std::exp(beta), false), ds.df());
}

TestResult peto(const MetaDataset& ds) {
  double sum = 0.0, resid = 0.0, var_sum = 0.0;
  int used = 0;
  for (const auto& t : ds.studies()) {
    const PetoTerms p = peto_stratum(t);
    if (!(p.variance > 0.0)) continue;
    sum += p.observed_minus_expected * p.observed_minus_expected / p.variance;
    resid += p.observed_minus_expected;
    var_sum += p.variance;
    ++used;
  }
  if (used < 2)
    throw DegenerateDatasetError(
        "Peto test needs at least two studies with positive variance");
  return TestResult::success(TestName::PETO,
                             std::max(0.0, sum - resid * resid / var_sum),
                             ds.df());
}

std::vector<TestResult> run_all(const MetaDataset& ds,
                                CorrectionPolicy policy) {
  std::vector<TestResult> out;
  out.reserve(kAllTests.size());
  for (TestName name : kAllTests) {
    try {
      switch (name) {
        case TestName::BDT: out.push_back(breslow_day_tarone(ds)); break;
        case TestName::BLISS: out.push_back(bliss(ds, policy)); break;
        case TestName::LIANG_SELF: out.push_back(liang_self(ds)); break;
        case TestName::LRT: out.push_back(lrt(ds)); break;
        case TestName::PETO: out.push_back(peto(ds)); break;
        case TestName::Q: out.push_back(q_statistic(ds, policy)); break;
        case TestName::WOOLF: out.push_back(woolf(ds, policy)); break;
        case TestName::ZELEN: out.push_back(zelen(ds)); break;
      }
    } catch (const std::exception& e) {
      out.push_back(TestResult::failure(name, ds.df(), e.what()));
    }
  }
  return out;
}

}  // namespace metahom
