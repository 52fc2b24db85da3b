#include "metahom/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include "metahom/case_study.hpp"
#include "metahom/errors.hpp"
#include "metahom/io.hpp"
#include "metahom/report.hpp"
#include "metahom/simulation.hpp"

namespace metahom {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");
}

int emit_report(const AnalysisReport& report, const std::string& out_dir,
                std::ostream& out) {
  print_report(out, report);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    auto tests = open_output(fs::path(out_dir) / "tests.csv");
    write_tests_csv(tests, report);
    auto comb = open_output(fs::path(out_dir) / "combination.csv");
    write_combination_csv(comb, report.combinations);
  }
  return report.ok_tests() > 0 ? kExitOk : kExitComputation;
}

int cmd_combine(const std::vector<std::string>& pairs, const std::string& file,
                const std::vector<double>& rhos, std::ostream& out) {
  std::vector<PValueEntry> entries;
  for (const auto& p : pairs) entries.push_back(parse_pvalue_pair(p));
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open '" + file + "'");
    for (const auto& e : read_pvalue_csv(in)) entries.push_back(e);
  }
  if (entries.empty())
    throw DomainError("combine needs at least one p:df pair (--pair or --file)");
  for (const auto& e : entries)
    if (!(e.p_value > 0.0 && e.p_value < 1.0))
      throw DomainError("p-value must lie strictly inside (0,1), got " +
                        format_number(e.p_value, 12));
  std::vector<RhoSpec> specs;
  for (double rho : rhos) specs.push_back(RhoSpec::scalar(rho));

  const CombinationInput input(entries);
  print_combination(out, "LANCASTER (independent)",
                    lancaster_independent(input));
  for (std::size_t i = 0; i < specs.size(); ++i)
    print_combination(out, "CORR. LANC. rho=" + format_number(rhos[i], 6),
                      lancaster_correlated(input, specs[i]));
  return kExitOk;
}

void write_simulation(const std::vector<SimConfig>& grid,
                      const fs::path& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  auto summary_csv = open_output(out_dir / "summary.csv");
  auto records_csv = open_output(out_dir / "records.csv");
  auto power_csv = open_output(out_dir / "power.csv");

  records_csv << "scenario,run,method,p_value,status\n";
  power_csv << "m,beta,tau2,method,rate\n";

  std::vector<SimSummary> summaries;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const SimConfig& cfg = grid[k];
    const auto records = run_experiment(cfg);
    summaries.push_back(summarize(cfg, records, cfg.sig_level));
    log << "scenario " << k + 1 << "/" << grid.size() << ": m=" << cfg.m
        << " beta=" << format_number(cfg.beta, 6)
        << " tau2=" << format_number(cfg.tau2, 6) << " done\n";

    for (const auto& rec : records) {
      auto row = [&](const std::string& method, bool ok, double p) {
        records_csv << k << ',' << rec.run_index << ',' << method << ','
                    << (ok ? format_number(p, 12) : std::string()) << ','
                    << (ok ? "ok" : "failed") << '\n';
      };
      for (std::size_t i = 0; i < kAllTests.size(); ++i)
        row(to_string(kAllTests[i]), rec.per_test[i].ok,
            rec.per_test[i].p_value);
      row("LANCASTER", rec.lancaster_independent_p.has_value(),
          rec.lancaster_independent_p.value_or(0.0));
      for (const auto& [rho, p] : rec.per_rho)
        row(corr_lanc_label(rho), p.has_value(), p.value_or(0.0));
    }
  }

  const auto& methods = summaries.front().rates;
  summary_csv << "scenario,m,delta,alpha_mean,sigma_alpha2,beta,tau2,runs,"
                 "sig_level,correction,seed";
  for (const auto& r : methods) summary_csv << ',' << r.method;
  for (const auto& r : methods) summary_csv << ",failed_" << r.method;
  summary_csv << '\n';
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    const auto& s = summaries[k];
    const auto& c = s.config;
    summary_csv << k << ',' << c.m << ',' << format_number(c.delta, 12) << ','
                << format_number(c.alpha_mean, 12) << ','
                << format_number(c.sigma_alpha2, 12) << ','
                << format_number(c.beta, 12) << ','
                << format_number(c.tau2, 12) << ',' << c.runs << ','
                << format_number(c.sig_level, 12) << ','
                << to_string(c.correction) << ',' << c.seed;
    for (const auto& r : s.rates) summary_csv << ',' << format_number(r.rate, 12);
    for (const auto& r : s.rates) summary_csv << ',' << r.failed_runs;
    summary_csv << '\n';
    for (const auto& r : s.rates)
      power_csv << c.m << ',' << format_number(c.beta, 12) << ','
                << format_number(c.tau2, 12) << ',' << r.method << ','
                << format_number(r.rate, 12) << '\n';
  }

  // Type I error layout: one row per method, one column per (m, beta)
  // scenario with tau2 = 0.
  std::vector<const SimSummary*> null_cells;
  for (const auto& s : summaries)
    if (s.config.tau2 == 0.0) null_cells.push_back(&s);
  if (!null_cells.empty()) {
    auto table = open_output(out_dir / "type1_table.csv");
    table << "method";
    for (const auto* s : null_cells)
      table << ",m=" << s->config.m
            << " beta=" << format_number(s->config.beta, 6);
    table << '\n';
    for (std::size_t i = 0; i < methods.size(); ++i) {
      table << methods[i].method;
      for (const auto* s : null_cells)
        table << ',' << format_number(s->rates[i].rate, 12);
      table << '\n';
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Effect size homogeneity tests for binary-outcome "
               "meta-analyses, combined with the correlated Lancaster "
               "procedure"};
  app.name("metahom");
  app.require_subcommand(1);

  std::string input_path, out_dir, correction = "half";
  std::string case_correction = "exclude";
  std::vector<double> rhos;

  auto* analyze = app.add_subcommand("analyze", "Run all tests on a CSV dataset");
  analyze->add_option("input", input_path, "Dataset CSV")->required();
  analyze->add_option("--correction", correction, "Zero-cell handling")
      ->check(CLI::IsMember({"half", "none", "exclude"}));
  analyze->add_option("--rho", rhos, "Correlation for the correlated Lancaster "
                                     "combiner (repeatable)");
  analyze->add_option("--out", out_dir, "Directory for tests.csv and "
                                        "combination.csv");

  std::vector<double> case_rhos;
  auto* case_study = app.add_subcommand(
      "case-study", "Analyze the embedded levothyroxine / preterm dataset");
  case_study->add_option("--correction", case_correction, "Zero-cell handling")
      ->check(CLI::IsMember({"half", "none", "exclude"}));
  case_study->add_option("--rho", case_rhos,
                         "Correlations (default 0.25 0.5 0.75)");
  case_study->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> pairs;
  std::string pair_file;
  std::vector<double> combine_rhos;
  auto* combine = app.add_subcommand("combine", "Combine p-values");
  combine->add_option("--pair", pairs, "p:df pair (repeatable)");
  combine->add_option("--file", pair_file, "CSV with header p_value,df");
  combine->add_option("--rho", combine_rhos, "Correlation (repeatable)");

  std::string config_path, sim_out;
  std::optional<std::uint64_t> seed;
  std::optional<double> sig_level;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation grid");
  simulate->add_option("config", config_path, "Simulation config file")
      ->required();
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--seed", seed, "Override the base seed");
  simulate->add_option("--sig-level", sig_level, "Override the significance "
                                                 "level");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("metahom");
  for (const auto& a : args) argv_store.push_back(a);
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze) {
      const MetaDataset ds = read_dataset_csv(fs::path(input_path));
      for (double r : rhos) RhoSpec::scalar(r);
      return emit_report(build_report(ds, parse_correction(correction), rhos),
                         out_dir, out);
    }
    if (*case_study) {
      if (case_rhos.empty()) case_rhos = {0.25, 0.5, 0.75};
      for (double r : case_rhos) RhoSpec::scalar(r);
      return emit_report(build_report(levothyroxine_preterm_dataset(),
                                      parse_correction(case_correction),
                                      case_rhos),
                         out_dir, out);
    }
    if (*combine) return cmd_combine(pairs, pair_file, combine_rhos, out);
    if (*simulate) {
      auto grid = parse_sim_config(fs::path(config_path));
      if (seed) {
        // Re-derive the per-scenario seeds from the new base.
        for (std::size_t k = 0; k < grid.size(); ++k)
          grid[k].seed = splitmix64(*seed + k);
      }
      if (sig_level) {
        for (auto& cfg : grid) {
          cfg.sig_level = *sig_level;
          cfg.validate();
        }
      }
      write_simulation(grid, sim_out, err);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace metahom
