#pragma once

#include <variant>
#include <vector>

#include "metahom/homogeneity.hpp"

namespace metahom {

struct PValueEntry {
  double p_value;
  int df;
};

// p-values and degrees of freedom to be combined. p-values are clamped to
// [1e-15, 1 - 1e-15]; NaN, values outside [0, 1] and df < 1 are rejected.
class CombinationInput {
 public:
  explicit CombinationInput(std::vector<PValueEntry> entries);

  // Collects the ok results; failed tests are dropped. Throws
  // EmptyInputError when nothing is left.
  static CombinationInput from_results(const std::vector<TestResult>& results);

  const std::vector<PValueEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  int total_df() const noexcept;

 private:
  std::vector<PValueEntry> entries_;
};

inline constexpr double kPValueFloor = 1e-15;

// Pairwise correlation between the transformed statistics: either one value
// for every pair or a full symmetric matrix with unit diagonal.
class RhoSpec {
 public:
  static RhoSpec scalar(double rho);
  static RhoSpec matrix(std::vector<std::vector<double>> rho);

  double at(std::size_t i, std::size_t k) const;
  // Throws InvalidRhoError if a matrix spec does not match n entries.
  void check_size(std::size_t n) const;

 private:
  explicit RhoSpec(std::variant<double, std::vector<std::vector<double>>> v)
      : value_(std::move(v)) {}
  std::variant<double, std::vector<std::vector<double>>> value_;
};

enum class CombinationMethod { independent, correlated };

struct CombinationResult {
  double t = 0.0;           // Lancaster statistic
  double expected_t = 0.0;  // sum of df
  double var_t = 0.0;
  double nu = 0.0;  // Satterthwaite degrees of freedom
  double c = 1.0;   // scale
  double t_a = 0.0; // c * t
  double p_value = 1.0;
  CombinationMethod method = CombinationMethod::independent;
};

CombinationResult lancaster_independent(const CombinationInput& input);
CombinationResult lancaster_correlated(const CombinationInput& input,
                                       const RhoSpec& rho);

}  // namespace metahom
