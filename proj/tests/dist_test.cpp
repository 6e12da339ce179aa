#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "uhdreg/csv.hpp"
#include "uhdreg/dist.hpp"
#include "uhdreg/rng.hpp"

using namespace uhdreg;

TEST_CASE("chi-square quantiles hit the oracle values") {
  // frozen from the erfc-recurrence oracle (tests/oracles.cpp)
  CHECK(chi2_upper_quantile(1, 0.5) == doctest::Approx(0.454936423120).epsilon(1e-9));
  CHECK(chi2_upper_quantile(1, 0.05) == doctest::Approx(3.841458820694).epsilon(1e-9));
  // chi2(2) is exponential with mean 2
  for (double alpha : {0.9, 0.5, 0.1, 0.01}) {
    CHECK(chi2_upper_quantile(2, alpha) ==
          doctest::Approx(-2.0 * std::log(alpha)).epsilon(1e-10));
  }
  for (int d : {1, 3, 7, 12, 40}) {
    for (double alpha : {0.9, 0.5, 0.05, 0.001}) {
      CHECK(chi2_upper_quantile(d, alpha) ==
            doctest::Approx(oracle::chi2_upper_quantile(d, alpha)).epsilon(1e-8));
    }
  }
}

TEST_CASE("chi-square quantile verified by 1e7-sample Monte Carlo") {
  GaussianSampler gauss(2024, 0);
  const double threshold = chi2_upper_quantile(1, 0.05);
  const int replicates = 10'000'000;
  long long exceed = 0;
  for (int r = 0; r < replicates; ++r) {
    double z = gauss();
    exceed += z * z > threshold ? 1 : 0;
  }
  double rate = static_cast<double>(exceed) / replicates;
  // 4 binomial standard errors at alpha = 0.05
  CHECK(std::fabs(rate - 0.05) < 4.0 * std::sqrt(0.05 * 0.95 / replicates));
}

TEST_CASE("quantile and tail probability round trip") {
  for (int d = 1; d <= 200; ++d) {
    for (double alpha : {0.001, 0.01, 0.05, 0.5, 0.99}) {
      double u = chi2_upper_quantile(d, alpha);
      CHECK(chi2_upper_tail(d, u) == doctest::Approx(alpha).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(chi2_upper_quantile(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(chi2_upper_quantile(3, 1.0), std::invalid_argument);
}

TEST_CASE("fisher quantile symmetry, frozen value, and Monte Carlo") {
  for (int d : {1, 4, 9}) {
    CHECK(fisher_upper_quantile(d, d, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
  }
  // square of the Student-t(10) 0.975 quantile
  CHECK(fisher_upper_quantile(1, 10, 0.05) == doctest::Approx(4.9646027437).epsilon(1e-8));

  // reciprocal symmetry across degrees of freedom
  for (auto [d1, d2] : {std::pair{1, 10}, {2, 4}, {7, 3}}) {
    for (double alpha : {0.05, 0.25, 0.5}) {
      double product = fisher_upper_quantile(d1, d2, alpha) *
                       fisher_upper_quantile(d2, d1, 1.0 - alpha);
      CHECK(product == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  // exceedance of the (2,4) quantile over 1e6 simulated Fisher draws
  const double threshold = fisher_upper_quantile(2, 4, 0.1);
  GaussianSampler gauss(77, 1);
  const int replicates = 1'000'000;
  int exceed = 0;
  for (int r = 0; r < replicates; ++r) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 2; ++i) {
      double z = gauss();
      num += z * z;
    }
    for (int i = 0; i < 4; ++i) {
      double z = gauss();
      den += z * z;
    }
    exceed += (num / 2.0) / (den / 4.0) > threshold ? 1 : 0;
  }
  double rate = static_cast<double>(exceed) / replicates;
  CHECK(std::fabs(rate - 0.1) < 0.001);
}

TEST_CASE("chi-square deviation thresholds at the e^-1 level") {
  auto t4 = chi2_deviation_thresholds(4, std::exp(-1.0));
  CHECK(t4.upper == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(t4.lower == doctest::Approx(0.0).epsilon(1e-12));
  auto t2 = chi2_deviation_thresholds(2, std::exp(-1.0));
  CHECK(t2.small_ball == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("wishart thresholds: plug-in, clamp, and guards") {
  auto t = wishart_deviation_thresholds(4, 1, std::exp(-1.0));
  double expected = 4.0 * std::pow(1.5 + std::sqrt(0.5), 2);
  CHECK(t.max_threshold == doctest::Approx(expected).epsilon(1e-12));

  // 1 - sqrt(d/n) - sqrt(2 log(1/x)/n) < 0 clamps the lower threshold to 0
  auto clamped = wishart_deviation_thresholds(5, 4, 0.05);
  CHECK(clamped.min_threshold == 0.0);

  CHECK_THROWS_AS(wishart_deviation_thresholds(3, 3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(wishart_deviation_thresholds(8, 2, 0.1, true), std::invalid_argument);
  auto with_ball = wishart_deviation_thresholds(9, 2, 0.1, true, 1.0);
  CHECK(with_ball.small_ball.has_value());
}

TEST_CASE("binomial surrogate tail bound") {
  CHECK(hypergeom_tail_bound(1, 10, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(hypergeom_tail_bound(4, 12, 1.0) ==
        doctest::Approx(std::pow(4.0 / 12.0, 4)).epsilon(1e-12));

  double bound = hypergeom_tail_bound(3, 30, 2.0 / 3.0);
  CHECK(bound >= oracle::binomial_tail_exact(3, 30, 2.0 / 3.0));

  CHECK_THROWS_AS(hypergeom_tail_bound(3, 30, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hypergeom_tail_bound(3, 30, 1.5), std::invalid_argument);
}

TEST_CASE("bound dominates the exact binomial tail on the full grid") {
  for (int k = 1; k <= 12; ++k) {
    for (int p = k; p <= 60; ++p) {
      for (int i = 1; i <= k; ++i) {
        double x = static_cast<double>(i) / k;
        CHECK(hypergeom_tail_bound(k, p, x) >=
              oracle::binomial_tail_exact(k, p, x) * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("tail bound verification harness") {
  auto chi2 = verify_tail_bound(TailBound::Chi2Upper, {{"d", 5.0}}, 0.01, 100000, 3);
  CHECK(chi2.pass);
  CHECK(*chi2.empirical_exceedance <= 0.01 + 3.0 * std::sqrt(0.01 * 0.99 / 100000.0));

  auto wmin = verify_tail_bound(TailBound::WishartMin, {{"n", 50.0}, {"d", 5.0}}, 0.05,
                                10000, 4);
  CHECK(wmin.pass);

  auto exact = verify_tail_bound(TailBound::HypergeomUpper, {{"k", 4.0}, {"p", 40.0}},
                                 0.5, 0, 0);
  CHECK(exact.pass);
  CHECK_FALSE(exact.replicates.has_value());
  CHECK(*exact.empirical_exceedance ==
        doctest::Approx(oracle::binomial_tail_exact(4, 40, 0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(verify_tail_bound(TailBound::Chi2Upper, {}, 0.1, 10000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_tail_bound(TailBound::Chi2Upper, {{"d", 3.0}}, 0.1, 10, 1),
                  std::invalid_argument);

  std::string row = tail_bound_csv_row(chi2);
  CHECK(row.find("chi2_upper") == 0);
  CHECK(row.find("PASS") != std::string::npos);
}
