#include "metahom/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "metahom/errors.hpp"
#include "metahom/lancaster.hpp"

namespace metahom {

void SimConfig::validate() const {
  if (m < 2) throw ConfigError("m must be >= 2");
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  if (!(sigma_alpha2 >= 0.0)) throw ConfigError("sigma_alpha2 must be >= 0");
  if (!(tau2 >= 0.0)) throw ConfigError("tau2 must be >= 0");
  if (!std::isfinite(alpha_mean) || !std::isfinite(beta))
    throw ConfigError("alpha_mean and beta must be finite");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (!(sig_level > 0.0 && sig_level < 1.0))
    throw ConfigError("sig_level must lie in (0,1)");
  for (double r : rhos)
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("rhos must lie in [0,1)");
}

namespace {

double logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

int draw_arm_size(RngStream& s, double delta) {
  for (;;) {
    const auto n = sample_poisson(s, delta);
    if (n >= 2) return static_cast<int>(n);
  }
}

RunRecord simulate_run(const SimConfig& cfg, int run_index) {
  RngStream stream = derive_substream(cfg.seed, static_cast<std::uint64_t>(run_index));
  const MetaDataset ds = generate_dataset(cfg, stream);
  const std::vector<TestResult> results = run_all(ds, cfg.correction);

  RunRecord rec;
  rec.run_index = run_index;
  for (std::size_t i = 0; i < results.size(); ++i)
    rec.per_test[i] = {results[i].p_value, results[i].ok()};

  std::optional<CombinationInput> input;
  try {
    input.emplace(CombinationInput::from_results(results));
    rec.lancaster_independent_p = lancaster_independent(*input).p_value;
  } catch (const Error&) {
    input.reset();
  }
  for (double rho : cfg.rhos) {
    std::optional<double> p;
    if (input) {
      try {
        p = lancaster_correlated(*input, RhoSpec::scalar(rho)).p_value;
      } catch (const Error&) {
      }
    }
    rec.per_rho.emplace_back(rho, p);
  }
  return rec;
}

void tally(MethodRate& rate, bool ok, double p, double sig_level) {
  if (!ok) {
    ++rate.failed_runs;
    return;
  }
  ++rate.ok_runs;
  if (p <= sig_level) ++rate.rejections;
}

}  // namespace

MetaDataset generate_dataset(const SimConfig& cfg, RngStream& stream) {
  const double alpha_sd = std::sqrt(cfg.sigma_alpha2);
  const double gamma_sd = std::sqrt(cfg.tau2);
  std::vector<StudyTable> studies;
  studies.reserve(cfg.m);
  for (int i = 0; i < cfg.m; ++i) {
    const int n1 = draw_arm_size(stream, cfg.delta);
    const int n0 = draw_arm_size(stream, cfg.delta);
    const double alpha = sample_normal(stream, cfg.alpha_mean, alpha_sd);
    const double gamma = sample_normal(stream, 0.0, gamma_sd);
    const double p0 = logistic(alpha);
    const double p1 = logistic(alpha + cfg.beta + gamma);
    const auto x1 = static_cast<int>(sample_binomial(stream, n1, p1));
    const auto x0 = static_cast<int>(sample_binomial(stream, n0, p0));
    studies.emplace_back(x1, n1, x0, n0, "sim-" + std::to_string(i + 1));
  }
  return MetaDataset(std::move(studies));
}

unsigned default_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("METAHOM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<RunRecord> run_experiment(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  std::vector<RunRecord> records(static_cast<std::size_t>(cfg.runs));
  if (threads == 0) threads = default_thread_count();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cfg.runs));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < cfg.runs; i = next.fetch_add(1))
      records[static_cast<std::size_t>(i)] = simulate_run(cfg, i);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

std::string corr_lanc_label(double rho) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "CORR_LANC_%g", rho);
  return buf;
}

const MethodRate& SimSummary::at(const std::string& method) const {
  for (const auto& r : rates)
    if (r.method == method) return r;
  throw std::out_of_range("no method '" + method + "' in summary");
}

SimSummary summarize(const SimConfig& cfg,
                     const std::vector<RunRecord>& records, double sig_level) {
  if (records.empty()) throw EmptyInputError("no simulation records");
  SimSummary out;
  out.config = cfg;
  for (TestName t : kAllTests) out.rates.push_back({to_string(t)});
  out.rates.push_back({"LANCASTER"});
  for (double rho : cfg.rhos) out.rates.push_back({corr_lanc_label(rho)});

  for (const auto& rec : records) {
    for (std::size_t i = 0; i < kAllTests.size(); ++i)
      tally(out.rates[i], rec.per_test[i].ok, rec.per_test[i].p_value,
            sig_level);
    tally(out.rates[kAllTests.size()], rec.lancaster_independent_p.has_value(),
          rec.lancaster_independent_p.value_or(1.0), sig_level);
    for (std::size_t k = 0; k < rec.per_rho.size() && k < cfg.rhos.size(); ++k) {
      const auto& p = rec.per_rho[k].second;
      tally(out.rates[kAllTests.size() + 1 + k], p.has_value(), p.value_or(1.0),
            sig_level);
    }
  }
  for (auto& r : out.rates)
    r.rate = r.ok_runs > 0 ? static_cast<double>(r.rejections) / r.ok_runs
                           : std::nan("");
  return out;
}

std::vector<SimConfig> expand_grid(const SimConfig& base,
                                   const std::vector<int>& ms,
                                   const std::vector<double>& betas,
                                   const std::vector<double>& tau2s) {
  std::vector<SimConfig> grid;
  std::uint64_t k = 0;
  for (int m : ms)
    for (double beta : betas)
      for (double tau2 : tau2s) {
        SimConfig cfg = base;
        cfg.m = m;
        cfg.beta = beta;
        cfg.tau2 = tau2;
        cfg.seed = splitmix64(base.seed + k++);
        grid.push_back(cfg);
      }
  return grid;
}

std::vector<SimConfig> standard_grid(std::uint64_t base_seed, int runs,
                                     CorrectionPolicy correction) {
  SimConfig base;
  base.delta = 50.0;
  base.alpha_mean = 0.0;
  base.sigma_alpha2 = 1.0;
  base.runs = runs;
  base.sig_level = 0.05;
  base.rhos = {0.25, 0.5, 0.75};
  base.correction = correction;
  base.seed = base_seed;
  return expand_grid(base, {5, 10, 20, 30}, {0.0, 2.0}, {0.0, 0.15, 0.3, 0.5});
}

std::vector<SimSummary> run_grid(const std::vector<SimConfig>& grid,
                                 unsigned threads) {
  std::vector<SimSummary> out;
  out.reserve(grid.size());
  for (const auto& cfg : grid)
    out.push_back(summarize(cfg, run_experiment(cfg, threads), cfg.sig_level));
  return out;
}

}  // namespace metahom
