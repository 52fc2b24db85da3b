#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "metahom/case_study.hpp"
#include "metahom/errors.hpp"
#include "metahom/study.hpp"
#include "oracles.hpp"

using namespace metahom;

TEST_CASE("StudyTable validation and accessors") {
  const StudyTable t(3, 10, 4, 12, "a");
  CHECK(t.total_events() == 7);
  CHECK(t.total_size() == 22);
  CHECK_FALSE(t.is_degenerate());
  CHECK_THROWS_AS(StudyTable(11, 10, 0, 5), DomainError);
  CHECK_THROWS_AS(StudyTable(-1, 10, 0, 5), DomainError);
  CHECK_THROWS_AS(StudyTable(0, 0, 0, 5), DomainError);
  CHECK(StudyTable(0, 4, 0, 5).is_degenerate());
  CHECK(StudyTable(4, 4, 5, 5).is_degenerate());
}

TEST_CASE("MetaDataset needs two studies") {
  CHECK_THROWS_AS(MetaDataset({{1, 5, 2, 5}}), DomainError);
  const MetaDataset ds({{1, 5, 2, 5}, {2, 6, 3, 7}});
  CHECK(ds.df() == 1);
}

TEST_CASE("log_odds_ratio examples") {
  const auto sym = log_odds_ratio({10, 30, 10, 30}, CorrectionPolicy::none);
  CHECK(sym.log_or == 0.0);
  CHECK(sym.se == doctest::Approx(std::sqrt(0.3)).epsilon(1e-15));
  CHECK_FALSE(sym.corrected);

  const auto wang = log_odds_ratio({0, 28, 9, 168}, CorrectionPolicy::half);
  CHECK(wang.corrected);
  CHECK(wang.log_or ==
        doctest::Approx(std::log((0.5 * 159.5) / (28.5 * 9.5))).epsilon(1e-14));
  CHECK(wang.se == doctest::Approx(std::sqrt(1 / 0.5 + 1 / 28.5 + 1 / 9.5 + 1 / 159.5)));

  const auto casey = log_odds_ratio({40, 339, 47, 338}, CorrectionPolicy::half);
  CHECK_FALSE(casey.corrected);
  CHECK(casey.log_or == doctest::Approx(std::log((40.0 * 291.0) / (299.0 * 47.0))).epsilon(1e-14));
  CHECK(std::exp(casey.log_or) == doctest::Approx(0.8283).epsilon(1e-4));

  CHECK_THROWS_AS(log_odds_ratio({0, 28, 9, 168}, CorrectionPolicy::none), ZeroCellError);
  CHECK_THROWS_AS(log_odds_ratio({0, 28, 9, 168}, CorrectionPolicy::exclude), ZeroCellError);
}

TEST_CASE("log_odds_ratio arm swap flips the sign") {
  std::mt19937_64 g(17);
  for (int i = 0; i < 500; ++i) {
    const StudyTable t = oracle::random_table(g);
    for (auto pol : {CorrectionPolicy::half, CorrectionPolicy::none}) {
      if (pol == CorrectionPolicy::none && t.has_zero_cell()) continue;
      const auto a = log_odds_ratio(t, pol);
      const auto b = log_odds_ratio(t.swapped(), pol);
      CHECK(a.log_or == doctest::Approx(-b.log_or).epsilon(1e-12));
      CHECK(a.se == doctest::Approx(b.se).epsilon(1e-14));
    }
  }
}

TEST_CASE("mh_pooled_or examples") {
  CHECK(mh_pooled_or(MetaDataset({{10, 30, 10, 30}, {10, 30, 10, 30}})) == doctest::Approx(1.0));
  const StudyTable single[] = {{10, 30, 5, 30}};
  CHECK(mh_pooled_or(single) == doctest::Approx(2.5).epsilon(1e-15));

  const MetaDataset ds = levothyroxine_preterm_dataset();
  double num = 0, den = 0;
  for (const auto& t : ds.studies()) {
    const double n = t.n1() + t.n0();
    num += double(t.x1()) * (t.n0() - t.x0()) / n;
    den += double(t.x0()) * (t.n1() - t.x1()) / n;
  }
  const double orc = mh_pooled_or(ds);
  CHECK(orc == doctest::Approx(num / den).epsilon(1e-15));
  CHECK(orc > 0.0);
  CHECK(orc < 1.0);

  CHECK_THROWS_AS(mh_pooled_or(MetaDataset({{3, 10, 0, 10}, {4, 10, 0, 12}})),
                  DegenerateDatasetError);
}

TEST_CASE("mh_pooled_or is exactly one when arm proportions match") {
  const MetaDataset ds({{3, 10, 6, 20}, {5, 25, 1, 5}, {12, 40, 9, 30}});
  CHECK(std::fabs(mh_pooled_or(ds) - 1.0) <= 1e-12);
}

TEST_CASE("conditional_expected_count") {
  const StudyTable t(10, 30, 10, 30);
  CHECK(conditional_expected_count(t, 1.0) == doctest::Approx(10.0).epsilon(1e-15));

  const double e = conditional_expected_count(t, 2.5);
  CHECK(e > 0.0);
  CHECK(e < 20.0);
  // 1.5 E^2 - (50 * 2.5 + 10) E + 20 * 30 * 2.5 = 0
  CHECK(std::fabs(1.5 * e * e - 135.0 * e + 1500.0) < 1e-10);
  CHECK(e == doctest::Approx(oracle::expected_count(t, 2.5)).epsilon(1e-12));

  // Null split of swapped arms sums to the margin.
  const StudyTable u(3, 17, 9, 11);
  CHECK(conditional_expected_count(u, 1.0) + conditional_expected_count(u.swapped(), 1.0) ==
        doctest::Approx(12.0).epsilon(1e-14));

  CHECK(conditional_expected_count({0, 10, 0, 12}, 2.0) == 0.0);
  CHECK(conditional_expected_count({10, 10, 12, 12}, 2.0) == 10.0);
  CHECK_THROWS_AS(conditional_expected_count(t, 0.0), DomainError);
}

TEST_CASE("conditional_expected_count residual and admissibility on random tables") {
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> logor(-5.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const StudyTable t = oracle::random_table(g);
    const double odds = std::exp(logor(g));
    const double e = conditional_expected_count(t, odds);
    const double X = t.total_events();
    if (t.is_degenerate()) continue;
    CHECK(e > std::max(0.0, X - t.n0()));
    CHECK(e < std::min(X, double(t.n1())));
    const double a = odds - 1.0;
    const double b = -((X + t.n1()) * odds + (t.n0() - X));
    const double c = X * t.n1() * odds;
    const double scale = std::max({1.0, std::fabs(a) * e * e, std::fabs(b * e), std::fabs(c)});
    CHECK(std::fabs(a * e * e + b * e + c) <= 1e-9 * scale);
  }
}

TEST_CASE("conditional_variance") {
  const StudyTable t(10, 30, 10, 30);
  CHECK(conditional_variance(t, 10.0) == doctest::Approx(10.0 / 3.0).epsilon(1e-15));

  const StudyTable u(4, 21, 7, 13);
  const double e = conditional_expected_count(u, 1.7);
  CHECK(conditional_variance(u, e) ==
        doctest::Approx(conditional_variance(u.swapped(), 11.0 - e)).epsilon(1e-14));

  // Approaching the lower endpoint drives the variance to zero.
  double prev = conditional_variance(t, 1.0);
  for (double eps : {1e-1, 1e-3, 1e-6}) {
    const double v = conditional_variance(t, eps);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK(prev < 1e-5);
  CHECK_THROWS_AS(conditional_variance(t, 0.0), BoundaryError);
  CHECK_THROWS_AS(conditional_variance(t, 20.0), BoundaryError);
}

TEST_CASE("correction policy names") {
  CHECK(parse_correction("half") == CorrectionPolicy::half);
  CHECK(parse_correction("exclude") == CorrectionPolicy::exclude);
  CHECK(std::string(to_string(CorrectionPolicy::none)) == "none");
  CHECK_THROWS_AS(parse_correction("quarter"), DomainError);
}

TEST_CASE("embedded case study rows") {
  const MetaDataset ds = levothyroxine_preterm_dataset();
  REQUIRE(ds.size() == 7);
  CHECK(ds[0] == StudyTable(40, 339, 47, 338, "Casey et al. (2017)"));
  CHECK(ds[5] == StudyTable(0, 28, 9, 168, "Wang et al. (2012)"));
}
