#include "metahom/lancaster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "metahom/errors.hpp"
#include "metahom/special_functions.hpp"

namespace metahom {

CombinationInput::CombinationInput(std::vector<PValueEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw EmptyInputError("no p-values to combine");
  for (auto& e : entries_) {
    if (!(e.p_value >= 0.0 && e.p_value <= 1.0))
      throw DomainError("p-value must lie in [0,1], got " +
                        std::to_string(e.p_value));
    if (e.df < 1)
      throw DomainError("degrees of freedom must be >= 1, got " +
                        std::to_string(e.df));
    e.p_value = std::clamp(e.p_value, kPValueFloor, 1.0 - kPValueFloor);
  }
}

CombinationInput CombinationInput::from_results(
    const std::vector<TestResult>& results) {
  std::vector<PValueEntry> entries;
  for (const auto& r : results)
    if (r.ok()) entries.push_back({r.p_value, r.df});
  if (entries.empty())
    throw EmptyInputError("every homogeneity test failed; nothing to combine");
  return CombinationInput(std::move(entries));
}

int CombinationInput::total_df() const noexcept {
  int sum = 0;
  for (const auto& e : entries_) sum += e.df;
  return sum;
}

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw InvalidRhoError("rho must lie in [0, 1), got " + std::to_string(rho));
}

}  // namespace

RhoSpec RhoSpec::scalar(double rho) {
  check_rho(rho);
  return RhoSpec(rho);
}

RhoSpec RhoSpec::matrix(std::vector<std::vector<double>> rho) {
  const std::size_t n = rho.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i].size() != n) throw InvalidRhoError("rho matrix is not square");
    if (rho[i][i] != 1.0)
      throw InvalidRhoError("rho matrix diagonal must be 1");
    for (std::size_t k = 0; k < i; ++k) {
      if (rho[i][k] != rho[k][i])
        throw InvalidRhoError("rho matrix is not symmetric");
      check_rho(rho[i][k]);
    }
  }
  return RhoSpec(std::move(rho));
}

double RhoSpec::at(std::size_t i, std::size_t k) const {
  if (const double* r = std::get_if<double>(&value_)) return i == k ? 1.0 : *r;
  return std::get<std::vector<std::vector<double>>>(value_).at(i).at(k);
}

void RhoSpec::check_size(std::size_t n) const {
  if (const auto* m = std::get_if<std::vector<std::vector<double>>>(&value_)) {
    if (m->size() != n)
      throw InvalidRhoError("rho matrix is " + std::to_string(m->size()) +
                            "x" + std::to_string(m->size()) + " but there are " +
                            std::to_string(n) + " p-values");
  }
}

CombinationResult lancaster_independent(const CombinationInput& input) {
  CombinationResult r;
  r.method = CombinationMethod::independent;
  for (const auto& e : input.entries())
    r.t += gamma_quantile_upper(e.p_value, 0.5 * e.df, 2.0);
  r.expected_t = input.total_df();
  r.var_t = 2.0 * r.expected_t;
  r.nu = r.expected_t;
  r.c = 1.0;
  r.t_a = r.t;
  r.p_value = chi_square_sf(r.t, r.nu);
  return r;
}

CombinationResult lancaster_correlated(const CombinationInput& input,
                                       const RhoSpec& rho) {
  rho.check_size(input.size());
  CombinationResult r = lancaster_independent(input);
  r.method = CombinationMethod::correlated;

  // cov_ik = 2 rho_ik sqrt(df_i df_k); equal df = m - 1 gives 2 rho (m - 1).
  const auto& e = input.entries();
  double cov_sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t k = i + 1; k < e.size(); ++k)
      cov_sum += 2.0 * rho.at(i, k) *
                 std::sqrt(static_cast<double>(e[i].df) * e[k].df);

  r.var_t = 2.0 * r.expected_t + 2.0 * cov_sum;
  if (!(r.var_t > 0.0)) throw InvalidRhoError("Var(T) must be positive");
  r.nu = 2.0 * r.expected_t * r.expected_t / r.var_t;
  r.c = r.nu / r.expected_t;
  r.t_a = r.c * r.t;
  r.p_value = chi_square_sf(r.t_a, r.nu);
  return r;
}

}  // namespace metahom
