#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metahom/homogeneity.hpp"
#include "metahom/random.hpp"
#include "metahom/study.hpp"

namespace metahom {

// One scenario of the binary-outcome meta-analysis generator.
struct SimConfig {
  int m = 10;                 // studies per meta-analysis
  double delta = 50.0;        // Poisson mean of each arm size
  double alpha_mean = 0.0;    // mean study intercept
  double sigma_alpha2 = 1.0;  // intercept variance
  double beta = 0.0;          // common log odds ratio
  double tau2 = 0.0;          // between-study effect variance
  int runs = 1000;
  double sig_level = 0.05;
  std::vector<double> rhos = {0.25, 0.5, 0.75};
  CorrectionPolicy correction = CorrectionPolicy::half;
  std::uint64_t seed = 1;

  // Throws ConfigError on out-of-range fields.
  void validate() const;
};

MetaDataset generate_dataset(const SimConfig& cfg, RngStream& stream);

struct TestOutcome {
  double p_value = 0.0;
  bool ok = false;
};

struct RunRecord {
  int run_index = 0;
  std::array<TestOutcome, 8> per_test{};  // indexed like kAllTests
  std::vector<std::pair<double, std::optional<double>>> per_rho;
  std::optional<double> lancaster_independent_p;
};

// Thread count used when run_experiment is given 0: hardware concurrency,
// capped by METAHOM_THREADS when set.
unsigned default_thread_count();

// Replicates are independent; run i draws from derive_substream(seed, i), so
// the output is identical for every thread count.
std::vector<RunRecord> run_experiment(const SimConfig& cfg,
                                      unsigned threads = 0);

struct MethodRate {
  std::string method;
  double rate = 0.0;
  int rejections = 0;
  int ok_runs = 0;
  int failed_runs = 0;
};

struct SimSummary {
  SimConfig config;
  std::vector<MethodRate> rates;  // tests, LANCASTER, then CORR_LANC_<rho>

  // Throws std::out_of_range for an unknown method label.
  const MethodRate& at(const std::string& method) const;
};

std::string corr_lanc_label(double rho);

SimSummary summarize(const SimConfig& cfg,
                     const std::vector<RunRecord>& records,
                     double sig_level);

// Expands a base scenario across grid axes (m outermost, then beta, then
// tau2). Scenario k gets seed splitmix64(base.seed + k).
std::vector<SimConfig> expand_grid(const SimConfig& base,
                                   const std::vector<int>& ms,
                                   const std::vector<double>& betas,
                                   const std::vector<double>& tau2s);

// The standard 4 x 2 x 4 grid: m in {5, 10, 20, 30}, beta in {0, 2},
// tau2 in {0, 0.15, 0.3, 0.5}, delta 50, alpha 0, sigma_alpha2 1.
std::vector<SimConfig> standard_grid(std::uint64_t base_seed, int runs = 1000,
                                     CorrectionPolicy correction =
                                         CorrectionPolicy::half);

std::vector<SimSummary> run_grid(const std::vector<SimConfig>& grid,
                                 unsigned threads = 0);

inline std::vector<SimSummary> full_grid(std::uint64_t base_seed,
                                         unsigned threads = 0) {
  return run_grid(standard_grid(base_seed), threads);
}

}  // namespace metahom
