#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "metahom/errors.hpp"
#include "metahom/lancaster.hpp"
#include "oracles.hpp"

using namespace metahom;

TEST_CASE("a single p-value passes through unchanged") {
  for (int df : {1, 2, 6, 29}) {
    for (double p : {1e-6, 0.01, 0.05, 0.3, 0.9}) {
      const CombinationInput in({{p, df}});
      CHECK(lancaster_independent(in).p_value == doctest::Approx(p).epsilon(1e-9));
      // One entry has no pairs, so rho does not matter.
      CHECK(lancaster_correlated(in, RhoSpec::scalar(0.6)).p_value ==
            doctest::Approx(p).epsilon(1e-9));
    }
  }
}

TEST_CASE("two p-values of one half with df 2") {
  const CombinationInput in({{0.5, 2}, {0.5, 2}});
  const auto r = lancaster_independent(in);
  CHECK(r.t == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.expected_t == 4.0);
  CHECK(r.var_t == 8.0);
  CHECK(r.p_value == doctest::Approx(oracle::chisq_sf_even(4.0 * std::log(2.0), 4)).epsilon(1e-12));
}

TEST_CASE("Satterthwaite moments for eight tests with df 6") {
  std::vector<PValueEntry> e(8, {0.2, 6});
  const auto r = lancaster_correlated(CombinationInput(e), RhoSpec::scalar(0.75));
  CHECK(r.expected_t == 48.0);
  CHECK(r.var_t == doctest::Approx(600.0).epsilon(1e-14));
  CHECK(r.nu == doctest::Approx(7.68).epsilon(1e-14));
  CHECK(r.c == doctest::Approx(0.16).epsilon(1e-14));
  CHECK(r.t == doctest::Approx(8.0 * oracle::chisq_isf_even(0.2, 6)).epsilon(1e-10));
  CHECK(r.t_a == doctest::Approx(0.16 * r.t).epsilon(1e-14));
}

TEST_CASE("rho zero reproduces the independent combiner") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<PValueEntry> e;
    const int n = 1 + rep % 8;
    for (int i = 0; i < n; ++i) e.push_back({u(g), 1 + rep % 5});
    const CombinationInput in(e);
    CHECK(lancaster_correlated(in, RhoSpec::scalar(0.0)).p_value ==
          doctest::Approx(lancaster_independent(in).p_value).epsilon(1e-13));
  }
}

TEST_CASE("combined p-value properties") {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> u(0.0005, 0.6);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<PValueEntry> e;
    const int n = 2 + rep % 7;
    const int df = 1 + rep % 9;
    for (int i = 0; i < n; ++i) e.push_back({u(g), df});
    const CombinationInput in(e);

    // Correlation discounts the evidence when the inputs are small.
    double prev = -1.0;
    for (double rho : {0.0, 0.25, 0.5, 0.75, 0.95}) {
      const double p = lancaster_correlated(in, RhoSpec::scalar(rho)).p_value;
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      if (lancaster_independent(in).p_value < 0.1) CHECK(p >= prev - 1e-12);
      prev = p;
    }

    auto shuffled = e;
    std::shuffle(shuffled.begin(), shuffled.end(), g);
    CHECK(lancaster_correlated(CombinationInput(shuffled), RhoSpec::scalar(0.5)).p_value ==
          doctest::Approx(lancaster_correlated(in, RhoSpec::scalar(0.5)).p_value).epsilon(1e-12));

    // Lowering any one p-value lowers the combined p-value.
    auto lower = e;
    lower[rep % n].p_value *= 0.5;
    CHECK(lancaster_correlated(CombinationInput(lower), RhoSpec::scalar(0.5)).p_value <
          lancaster_correlated(in, RhoSpec::scalar(0.5)).p_value);
  }
}

TEST_CASE("p-values are clamped") {
  const CombinationInput in({{0.0, 6}, {1.0, 6}});
  CHECK(in.entries()[0].p_value == kPValueFloor);
  CHECK(in.entries()[1].p_value == 1.0 - kPValueFloor);
  const auto r = lancaster_correlated(in, RhoSpec::scalar(0.5));
  CHECK(std::isfinite(r.t));
  CHECK(std::isfinite(r.p_value));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(CombinationInput({}), EmptyInputError);
  CHECK_THROWS_AS(CombinationInput({{1.2, 6}}), DomainError);
  CHECK_THROWS_AS(CombinationInput({{std::nan(""), 6}}), DomainError);
  CHECK_THROWS_AS(CombinationInput({{0.2, 0}}), DomainError);
  CHECK_THROWS_AS(RhoSpec::scalar(1.0), InvalidRhoError);
  CHECK_THROWS_AS(RhoSpec::scalar(1.2), InvalidRhoError);
  CHECK_THROWS_AS(RhoSpec::scalar(-0.1), InvalidRhoError);

  std::vector<TestResult> results = {TestResult::failure(TestName::BDT, 6, "x")};
  CHECK_THROWS_AS(CombinationInput::from_results(results), EmptyInputError);
  results.push_back(TestResult::success(TestName::Q, 3.0, 6));
  CHECK(CombinationInput::from_results(results).size() == 1);
}

TEST_CASE("rho matrix") {
  CHECK_THROWS_AS(RhoSpec::matrix({{1.0, 0.2}, {0.3, 1.0}}), InvalidRhoError);
  CHECK_THROWS_AS(RhoSpec::matrix({{0.9, 0.2}, {0.2, 1.0}}), InvalidRhoError);
  CHECK_THROWS_AS(RhoSpec::matrix({{1.0, 1.0}, {1.0, 1.0}}), InvalidRhoError);

  const CombinationInput in({{0.01, 4}, {0.04, 4}, {0.2, 4}});
  const auto m = RhoSpec::matrix({{1, 0.4, 0.4}, {0.4, 1, 0.4}, {0.4, 0.4, 1}});
  CHECK(lancaster_correlated(in, m).p_value ==
        doctest::Approx(lancaster_correlated(in, RhoSpec::scalar(0.4)).p_value).epsilon(1e-14));

  const auto two = RhoSpec::matrix({{1, 0.4}, {0.4, 1}});
  CHECK_THROWS_AS(lancaster_correlated(in, two), InvalidRhoError);

  // Unequal df: cov = 2 rho sqrt(df_i df_k).
  const CombinationInput mixed({{0.1, 2}, {0.1, 8}});
  const auto r = lancaster_correlated(mixed, RhoSpec::scalar(0.5));
  CHECK(r.var_t == doctest::Approx(2.0 * 10.0 + 2.0 * (2.0 * 0.5 * 4.0)).epsilon(1e-14));
}
