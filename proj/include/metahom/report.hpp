#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metahom/homogeneity.hpp"
#include "metahom/lancaster.hpp"
#include "metahom/study.hpp"

namespace metahom {

struct CombinationRow {
  std::optional<double> rho;  // empty for the independent combiner
  std::optional<CombinationResult> result;
  std::string failure;
};

// Test results in fixed order followed by one combination row for the
// independent combiner and one per requested rho.
struct AnalysisReport {
  MetaDataset dataset;
  CorrectionPolicy correction;
  std::vector<TestResult> tests;
  std::vector<CombinationRow> combinations;

  int ok_tests() const;
};

AnalysisReport build_report(const MetaDataset& ds, CorrectionPolicy policy,
                            const std::vector<double>& rhos);

// Human-readable tables, 6 significant digits.
void print_report(std::ostream& out, const AnalysisReport& report);
void print_combination(std::ostream& out, const std::string& label,
                       const CombinationResult& r);

// Machine-readable CSVs, 12 significant digits.
void write_tests_csv(std::ostream& out, const AnalysisReport& report);
void write_combination_csv(std::ostream& out,
                           const std::vector<CombinationRow>& rows);

std::string format_number(double v, int digits);

}  // namespace metahom
