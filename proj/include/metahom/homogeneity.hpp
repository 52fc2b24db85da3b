#pragma once

#include <array>
#include <string>
#include <vector>

#include "metahom/study.hpp"

namespace metahom {

enum class TestName { BDT, BLISS, LIANG_SELF, LRT, PETO, Q, WOOLF, ZELEN };

inline constexpr std::array<TestName, 8> kAllTests = {
    TestName::BDT, TestName::BLISS, TestName::LIANG_SELF, TestName::LRT,
    TestName::PETO, TestName::Q, TestName::WOOLF, TestName::ZELEN};

const char* to_string(TestName name) noexcept;
// Human-readable label ("LIANG & SELF").
const char* display_name(TestName name) noexcept;

enum class TestStatus { ok, failed };

struct TestResult {
  TestName test_name{};
  double statistic = 0.0;
  int df = 0;
  double p_value = 0.0;
  TestStatus status = TestStatus::ok;
  std::string reason;  // empty when ok

  bool ok() const noexcept { return status == TestStatus::ok; }

  static TestResult success(TestName name, double statistic, int df);
  static TestResult failure(TestName name, int df, std::string reason);
};

// Null (common effect) fixed-effects logistic model.
struct NullLogisticFit {
  std::vector<double> alphas;  // +-inf for studies with no/all events
  double beta = 0.0;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Maximizes the common-effect log likelihood by profiling: each intercept is
// solved by 1-D Newton for fixed beta, and beta by Newton on the profile
// score. Throws SeparationError when |beta| runs past 30, ConvergenceError
// after 100 outer iterations, DegenerateDatasetError when every study is
// degenerate.
NullLogisticFit fit_null_logistic(std::span<const StudyTable> studies);

// Log likelihood of the saturated (per-arm proportion) model.
double saturated_loglik(std::span<const StudyTable> studies);

// Maximizer of the conditional (noncentral hypergeometric) likelihood given
// each study's event margin.
double fit_conditional_mle(std::span<const StudyTable> studies);

// Bliss's small-sample rescaling of a Q statistic; clamped at zero.
double bliss_statistic(double q, int m, double mean_dof);

struct PetoTerms {
  double observed_minus_expected;
  double variance;
};
PetoTerms peto_stratum(const StudyTable& table);

TestResult lrt(const MetaDataset& ds);
TestResult q_statistic(const MetaDataset& ds,
                       CorrectionPolicy policy = CorrectionPolicy::half);
TestResult bliss(const MetaDataset& ds,
                 CorrectionPolicy policy = CorrectionPolicy::half);
TestResult breslow_day_tarone(const MetaDataset& ds);
TestResult zelen(const MetaDataset& ds);
TestResult liang_self(const MetaDataset& ds);
TestResult woolf(const MetaDataset& ds,
                 CorrectionPolicy policy = CorrectionPolicy::half);
TestResult peto(const MetaDataset& ds);

// Sum of (x1 - E)^2 / var over non-degenerate strata at a fixed odds ratio,
// optionally minus the Tarone correction term. Exposed for use by the
// score-based tests and their property checks.
double score_homogeneity_statistic(const MetaDataset& ds, double odds_ratio,
                                   bool tarone_adjust);

// All eight tests in the fixed order of kAllTests. A test that cannot be
// computed comes back with status failed; the batch never throws.
std::vector<TestResult> run_all(const MetaDataset& ds,
                                CorrectionPolicy policy = CorrectionPolicy::half);

}  // namespace metahom
