#include "metahom/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "metahom/errors.hpp"

namespace metahom {

std::string format_number(double v, int digits) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int AnalysisReport::ok_tests() const {
  int n = 0;
  for (const auto& t : tests) n += t.ok() ? 1 : 0;
  return n;
}

AnalysisReport build_report(const MetaDataset& ds, CorrectionPolicy policy,
                            const std::vector<double>& rhos) {
  AnalysisReport report{ds, policy, run_all(ds, policy), {}};

  std::optional<CombinationInput> input;
  std::string why;
  try {
    input.emplace(CombinationInput::from_results(report.tests));
  } catch (const Error& e) {
    why = e.what();
  }

  CombinationRow indep;
  if (input) {
    indep.result = lancaster_independent(*input);
  } else {
    indep.failure = why;
  }
  report.combinations.push_back(indep);

  for (double rho : rhos) {
    CombinationRow row;
    row.rho = rho;
    if (input) {
      row.result = lancaster_correlated(*input, RhoSpec::scalar(rho));
    } else {
      row.failure = why;
    }
    report.combinations.push_back(row);
  }
  return report;
}

namespace {

void pad(std::ostream& out, const std::string& s, std::size_t width) {
  out << s;
  for (std::size_t i = s.size(); i < width; ++i) out << ' ';
}

std::string combination_label(const CombinationRow& row) {
  return row.rho ? "CORR. LANC. rho=" + format_number(*row.rho, 6)
                 : std::string("LANCASTER");
}

}  // namespace

void print_report(std::ostream& out, const AnalysisReport& report) {
  out << "Studies: " << report.dataset.size()
      << "   correction: " << to_string(report.correction) << "\n\n";
  std::size_t width = 8;
  for (const auto& t : report.dataset.studies())
    width = std::max(width, t.label().size() + 2);
  pad(out, "Study", width);
  out << "Treatment     Control\n";
  for (const auto& t : report.dataset.studies()) {
    pad(out, t.label(), width);
    pad(out, std::to_string(t.x1()) + "/" + std::to_string(t.n1()), 14);
    out << t.x0() << '/' << t.n0() << '\n';
  }
  out << '\n';
  pad(out, "Method", 16);
  pad(out, "Statistic", 14);
  pad(out, "df", 5);
  out << "p-value\n";
  for (const auto& t : report.tests) {
    pad(out, display_name(t.test_name), 16);
    if (t.ok()) {
      pad(out, format_number(t.statistic, 6), 14);
      pad(out, std::to_string(t.df), 5);
      out << format_number(t.p_value, 6) << '\n';
    } else {
      out << "FAILED  (" << t.reason << ")\n";
    }
  }
  out << '\n';
  pad(out, "Combination", 24);
  pad(out, "T", 12);
  pad(out, "nu", 10);
  pad(out, "c", 10);
  pad(out, "T_A", 12);
  out << "p-value\n";
  for (const auto& row : report.combinations) {
    pad(out, combination_label(row), 24);
    if (!row.result) {
      out << "FAILED  (" << row.failure << ")\n";
      continue;
    }
    const auto& r = *row.result;
    pad(out, format_number(r.t, 6), 12);
    pad(out, format_number(r.nu, 6), 10);
    pad(out, format_number(r.c, 6), 10);
    pad(out, format_number(r.t_a, 6), 12);
    out << format_number(r.p_value, 6) << '\n';
  }
}

void print_combination(std::ostream& out, const std::string& label,
                       const CombinationResult& r) {
  out << label << '\n'
      << "  T      = " << format_number(r.t, 6) << '\n'
      << "  E(T)   = " << format_number(r.expected_t, 6) << '\n'
      << "  Var(T) = " << format_number(r.var_t, 6) << '\n'
      << "  nu     = " << format_number(r.nu, 6) << '\n'
      << "  c      = " << format_number(r.c, 6) << '\n'
      << "  T_A    = " << format_number(r.t_a, 6) << '\n'
      << "  p      = " << format_number(r.p_value, 6) << '\n';
}

void write_tests_csv(std::ostream& out, const AnalysisReport& report) {
  out << "method,statistic,df,p_value,status\n";
  for (const auto& t : report.tests)
    out << to_string(t.test_name) << ',' << format_number(t.statistic, 12)
        << ',' << t.df << ',' << format_number(t.p_value, 12) << ','
        << (t.ok() ? "ok" : "failed") << '\n';
}

void write_combination_csv(std::ostream& out,
                           const std::vector<CombinationRow>& rows) {
  out << "method,rho,t,expected_t,var_t,nu,c,t_a,p_value,status\n";
  for (const auto& row : rows) {
    out << (row.rho ? "CORR_LANC" : "LANCASTER") << ','
        << (row.rho ? format_number(*row.rho, 12) : std::string()) << ',';
    if (!row.result) {
      out << ",,,,,,,failed\n";
      continue;
    }
    const auto& r = *row.result;
    out << format_number(r.t, 12) << ',' << format_number(r.expected_t, 12)
        << ',' << format_number(r.var_t, 12) << ','
        << format_number(r.nu, 12) << ',' << format_number(r.c, 12) << ','
        << format_number(r.t_a, 12) << ',' << format_number(r.p_value, 12)
        << ",ok\n";
  }
}

}  // namespace metahom
