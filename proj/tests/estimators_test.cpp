#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "uhdreg/csv.hpp"
#include "uhdreg/estimators.hpp"
#include "uhdreg/rng.hpp"

using namespace uhdreg;

namespace {

DesignMatrix random_fixed_design(int n, int p, std::uint64_t seed) {
  GaussianSampler gauss(seed, 0);
  Eigen::MatrixXd m(n, p);
  gauss.fill(m);
  return make_fixed_design(std::move(m));
}

DesignMatrix orthogonal_design(int n, int p, std::uint64_t seed) {
  GaussianSampler gauss(seed, 0);
  Eigen::MatrixXd m(n, p);
  gauss.fill(m);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  DesignMatrix d = make_fixed_design(std::sqrt(static_cast<double>(n)) * q);
  d.normalized = true;
  return d;
}

}  // namespace

TEST_CASE("best subset equals hard thresholding on orthogonal designs") {
  auto d = orthogonal_design(16, 8, 5);
  GaussianSampler gauss(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd y(16);
    gauss.fill(y);
    for (int k : {1, 2, 4}) {
      auto [theta, rss] = best_subset_ls(y, d, k);
      CHECK(rss == doctest::Approx(oracle::orthogonal_best_rss(d.entries, y, k))
                       .epsilon(1e-9));
    }
  }
}

TEST_CASE("noiseless identifiable signal is recovered exactly") {
  auto d = random_fixed_design(12, 9, 8);
  Eigen::VectorXd y = 2.0 * d.entries.col(1) - 3.0 * d.entries.col(6);
  auto [theta, rss] = best_subset_ls(y, d, 2);
  CHECK(rss < 1e-18 * y.squaredNorm());
  CHECK(theta.support() == std::vector<int>{2, 7});
}

TEST_CASE("k = n saturates at the full least-squares residual") {
  auto d = random_fixed_design(6, 5, 9);
  GaussianSampler gauss(10, 0);
  Eigen::VectorXd y(6);
  gauss.fill(y);
  auto [theta, rss] = best_subset_ls(y, d, 5);
  auto [theta_full, rss_full] = full_ls(y, d);
  CHECK(rss == doctest::Approx(rss_full).epsilon(1e-10));
}

TEST_CASE("best subset matches the normal-equation brute force for p <= 8") {
  GaussianSampler gauss(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = random_fixed_design(10, 8, 100 + trial);
    Eigen::VectorXd y(10);
    gauss.fill(y);
    for (int k : {1, 2, 3}) {
      auto [theta, rss] = best_subset_ls(y, d, k);
      auto [cols, rss_oracle] = oracle::brute_force_subset_ls(d.entries, y, k);
      CHECK(rss == doctest::Approx(rss_oracle).epsilon(1e-9));
      std::vector<int> support_oracle(cols.size());
      for (std::size_t i = 0; i < cols.size(); ++i) support_oracle[i] = cols[i] + 1;
      CHECK(theta.support() == support_oracle);
    }
  }
}

TEST_CASE("rss path is nonincreasing in k") {
  auto d = random_fixed_design(12, 7, 13);
  GaussianSampler gauss(14, 0);
  Eigen::VectorXd y(12);
  gauss.fill(y);
  double prev = y.squaredNorm();
  for (int k = 1; k <= 6; ++k) {
    double rss = best_subset_ls(y, d, k).second;
    CHECK(rss <= prev * (1.0 + 1e-12));
    prev = rss;
  }
}

TEST_CASE("variance-free penalty values and guards") {
  const double e = std::exp(1.0);
  CHECK(pen_v(1, 41, 20, 3.0) == doctest::Approx(3.0 * std::log(e * 20.0) / 41.0));
  // k = p with n >= 4p + 1 gives K p / n
  CHECK(pen_v(5, 21, 5, 2.0) == doctest::Approx(2.0 * 5.0 / 21.0).epsilon(1e-12));
  // increasing in k whenever p >= k
  for (int n : {25, 60}) {
    double prev = 0.0;
    for (int k = 1; k <= (n - 1) / 4; ++k) {
      double value = pen_v(k, n, 40, 3.0);
      CHECK(value > prev);
      prev = value;
    }
  }
  CHECK_THROWS_AS(pen_v(0, 41, 20, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(pen_v(11, 41, 20, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(pen_v(1, 41, 20, 0.0), std::invalid_argument);
}

TEST_CASE("select_v prefers a single coordinate under pure noise") {
  const int replicates = 500;
  int picked_one = 0;
  for (int r = 0; r < replicates; ++r) {
    auto d = generate_gaussian_design(30, 10, 2000, 2 * r);
    GaussianSampler gauss(2000, 2 * r + 1);
    Eigen::VectorXd y(30);
    gauss.fill(y);
    auto result = select_v(y, d, 3.0);
    picked_one += result.selected_k == 1 ? 1 : 0;
  }
  CHECK(picked_one >= static_cast<int>(0.6 * replicates));
}

TEST_CASE("select_v keeps a strong 2-sparse support") {
  const int replicates = 500;
  int covered = 0;
  for (int r = 0; r < replicates; ++r) {
    auto d = orthogonal_design(40, 8, 3000 + r);
    GaussianSampler gauss(3001, r);
    Eigen::VectorXd noise(40);
    gauss.fill(noise);
    Eigen::VectorXd y = 10.0 * d.entries.col(0) + 10.0 * d.entries.col(1) + noise;
    auto result = select_v(y, d, 3.0);
    bool has1 = false, has2 = false;
    for (int idx : result.support) {
      has1 |= idx == 1;
      has2 |= idx == 2;
    }
    covered += (has1 && has2) ? 1 : 0;
  }
  CHECK(covered >= static_cast<int>(0.95 * replicates));
}

TEST_CASE("select_v criterion shifts by 2 log c under scaling and keeps its argmin") {
  auto d = random_fixed_design(21, 6, 15);
  GaussianSampler gauss(16, 0);
  Eigen::VectorXd y(21);
  gauss.fill(y);
  y += 4.0 * d.entries.col(2);
  auto base = select_v(y, d, 3.0);
  const double c = 7.5;
  auto scaled = select_v(c * y, d, 3.0);
  CHECK(scaled.selected_k == base.selected_k);
  CHECK(scaled.support == base.support);
  for (std::size_t i = 0; i < base.criterion_path.size(); ++i) {
    CHECK(scaled.criterion_path[i].second - base.criterion_path[i].second ==
          doctest::Approx(2.0 * std::log(c)).epsilon(1e-8));
  }
}

TEST_CASE("select_v short-circuits on a zero-residual model") {
  auto d = random_fixed_design(25, 6, 17);
  Eigen::VectorXd y = d.entries.col(3);  // exactly 1-sparse
  auto result = select_v(y, d, 3.0);
  CHECK(result.selected_k == 1);
  CHECK(result.support == std::vector<int>{4});
  CHECK(result.rss < 1e-18 * y.squaredNorm() + 1e-300);
}

TEST_CASE("kstar_n scan satisfies its defining inequality") {
  auto value = [](int k, int p) {
    return k * (1.0 + std::log(static_cast<double>(p) / k));
  };
  int k = kstar_n(50, 5000);
  CHECK(k == 7);  // frozen from the scan: 6*(1+log(5000/6)) = 46.35 < 50 <= 52.99
  CHECK(value(k, 5000) >= 50.0);
  CHECK(value(k - 1, 5000) < 50.0);

  CHECK(kstar_n(1, 1) == 1);

  int prev = 1;
  for (int n = 2; n <= 64; n += 3) {
    int current = kstar_n(n, 100);
    CHECK(current >= prev);
    prev = current;
  }

  // p < n can make the inequality unsatisfiable: max of k(1+log(p/k)) is p
  CHECK_THROWS_AS(kstar_n(10000, 10), std::domain_error);
}

TEST_CASE("select_bm evaluates {1..k*} plus the full model and takes the argmin") {
  // k* = 8 at (n,p) = (12,14): every enumeration fits a small budget
  CHECK(kstar_n(12, 14) == 8);
  auto d = generate_gaussian_design(12, 14, 4000, 0);
  GaussianSampler gauss(4000, 1);
  Eigen::VectorXd y(12);
  gauss.fill(y);
  auto result = select_bm(y, d, 1.0);

  REQUIRE(result.criterion_path.size() == 9);  // k = 1..8 plus k = n
  for (int k = 1; k <= 8; ++k) {
    double rss = result.rss_path[k - 1].second;
    double expected = rss + 4.0 * k * (4.0 + std::log(14.0 / k));
    CHECK(result.criterion_path[k - 1].second == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(result.criterion_path.back().first == 12);
  CHECK(result.criterion_path.back().second ==
        doctest::Approx(result.rss_path.back().second + 24.0).epsilon(1e-12));

  // selected_k is the criterion argmin (ties toward smaller k)
  double best = result.criterion;
  for (const auto& [k, value] : result.criterion_path) CHECK(best <= value + 1e-12);
  // p > n makes the full model interpolate, and at this scale pen(n) = 2n
  // undercuts every sparse penalty, so the full entry wins
  CHECK(result.rss_path.back().second < 1e-12);
  CHECK(result.selected_k == 12);
}

TEST_CASE("select_bm: zero-residual sparse entries are ordered by the penalty") {
  auto d = generate_gaussian_design(12, 14, 4100, 0);
  Eigen::VectorXd y = d.entries.col(1) - 2.0 * d.entries.col(6);
  auto result = select_bm(y, d, 1.0);
  // every k >= 2 fits exactly, so those criteria are sigma^2 pen(k),
  // increasing in k
  for (std::size_t i = 1; i + 1 < result.criterion_path.size(); ++i) {
    CHECK(result.rss_path[i].second < 1e-12);
    CHECK(result.criterion_path[i].second ==
          doctest::Approx(4.0 * result.rss_path[i].first *
                          (4.0 + std::log(14.0 / result.rss_path[i].first)))
              .epsilon(1e-9));
    if (i >= 2) {
      CHECK(result.criterion_path[i].second > result.criterion_path[i - 1].second);
    }
  }
}

TEST_CASE("select_bm is invariant under joint (y, sigma) scaling") {
  auto d = generate_gaussian_design(12, 14, 4200, 0);
  GaussianSampler gauss(4200, 1);
  Eigen::VectorXd y(12);
  gauss.fill(y);
  y += 3.0 * d.entries.col(4);
  auto base = select_bm(y, d, 1.0);
  const double c = 12.0;
  auto scaled = select_bm(c * y, d, c * c);
  CHECK(scaled.selected_k == base.selected_k);
  CHECK(scaled.criterion == doctest::Approx(c * c * base.criterion).epsilon(1e-9));
}

TEST_CASE("select_bm rejects infeasible enumerations up front") {
  // the (30,40) scale has k* = 16; C(40,6) already exceeds the default budget
  auto d = generate_gaussian_design(30, 40, 4300, 0);
  Eigen::VectorXd y = d.entries.col(0);
  CHECK_THROWS_AS(select_bm(y, d, 1.0), budget_error);
}

TEST_CASE("full least squares degenerate cases") {
  auto wide = random_fixed_design(4, 7, 23);
  GaussianSampler gauss(24, 0);
  Eigen::VectorXd y(4);
  gauss.fill(y);
  auto [theta, rss] = full_ls(y, wide);
  CHECK(rss < 1e-18 * y.squaredNorm());

  auto zero = make_fixed_design(Eigen::MatrixXd::Zero(5, 3));
  Eigen::VectorXd y5 = Eigen::VectorXd::Ones(5);
  auto [theta0, rss0] = full_ls(y5, zero);
  CHECK(theta0.norm() == 0.0);
  CHECK(rss0 == doctest::Approx(5.0));

  auto ortho = orthogonal_design(8, 5, 25);
  Eigen::VectorXd y8(8);
  GaussianSampler gauss8(26, 0);
  gauss8.fill(y8);
  auto [theta_o, rss_o] = full_ls(y8, ortho);
  Eigen::VectorXd expected = ortho.entries.transpose() * y8 / 8.0;
  CHECK((theta_o - expected).norm() < 1e-9);
}

TEST_CASE("selection result serializes to one CSV row") {
  auto d = random_fixed_design(25, 6, 27);
  Eigen::VectorXd y = d.entries.col(1) + d.entries.col(2);
  auto result = select_v(y, d, 3.0);
  std::string row = selection_csv_row(result);
  CHECK(row.rfind("V,", 0) == 0);
  CHECK(row.find("2;3") != std::string::npos);
}
