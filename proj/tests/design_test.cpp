#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "uhdreg/csv.hpp"
#include "uhdreg/design.hpp"
#include "uhdreg/rng.hpp"

using namespace uhdreg;

namespace {

DesignMatrix random_fixed_design(int n, int p, std::uint64_t seed) {
  GaussianSampler gauss(seed, 0);
  Eigen::MatrixXd m(n, p);
  gauss.fill(m);
  return make_fixed_design(std::move(m));
}

// columns orthogonal with norm sqrt(n): sqrt(n) times an orthonormal basis
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

TEST_CASE("gaussian design generation is deterministic in the seed") {
  auto a = generate_gaussian_design(2, 2, Eigen::MatrixXd::Identity(2, 2), 42);
  auto b = generate_gaussian_design(2, 2, Eigen::MatrixXd::Identity(2, 2), 42);
  CHECK(a.entries == b.entries);
  CHECK(a.kind == DesignKind::GaussianIID);
  auto c = generate_gaussian_design(2, 2, Eigen::MatrixXd::Identity(2, 2), 43);
  CHECK(a.entries != c.entries);
  // the implicit-identity overload draws the same variates
  auto d = generate_gaussian_design(2, 2, 42);
  CHECK(a.entries == d.entries);
}

TEST_CASE("first simulation setting draws a 50 x 5000 design") {
  auto d = generate_gaussian_design(50, 5000, 7);
  CHECK(d.n() == 50);
  CHECK(d.p() == 5000);
  CHECK_FALSE(d.normalized);
}

TEST_CASE("unit covariance column has empirical variance near 1 across seeds") {
  double sum = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    auto d = generate_gaussian_design(100, 1, Eigen::MatrixXd::Identity(1, 1), 1000 + s);
    sum += d.entries.col(0).squaredNorm() / 100.0;
  }
  double mean_variance = sum / seeds;
  CHECK(mean_variance > 0.9);
  CHECK(mean_variance < 1.1);
}

TEST_CASE("empirical gram of a large identity-covariance draw is near identity") {
  auto d = generate_gaussian_design(10000, 3, 5);
  Eigen::MatrixXd gram = d.entries.transpose() * d.entries / 10000.0;
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("non-psd or asymmetric covariance is rejected") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(generate_gaussian_design(5, 2, bad, 1), std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(generate_gaussian_design(5, 2, asym, 1), std::invalid_argument);
}

TEST_CASE("normalize_columns rescales to sqrt(n) and is idempotent") {
  auto d = make_fixed_design(Eigen::MatrixXd::Identity(3, 3));
  auto normalized = normalize_columns(d);
  CHECK(normalized.normalized);
  for (int j = 0; j < 3; ++j) {
    CHECK(normalized.entries.col(j).norm() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }
  CHECK(normalized.entries(0, 0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  auto again = normalize_columns(normalized);
  CHECK((again.entries - normalized.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalize_columns names the zero column") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(4, 3);
  m.col(1).setZero();
  auto d = make_fixed_design(m);
  CHECK_THROWS_WITH_AS(normalize_columns(d), doctest::Contains("column 2"),
                       std::invalid_argument);
}

TEST_CASE("restricted eigenvalues of an orthogonal design equal n") {
  auto d = orthogonal_design(8, 5, 11);
  for (int k : {1, 2, 5}) {
    auto spec = restricted_eigenvalues(d, k);
    CHECK(spec.phi_minus == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(spec.phi_plus == doctest::Approx(8.0).epsilon(1e-9));
  }
}

TEST_CASE("duplicated columns give phi_minus = 0 at order 2") {
  auto d = random_fixed_design(6, 4, 3);
  d.entries.col(3) = d.entries.col(0);
  auto spec = restricted_eigenvalues(d, 2);
  CHECK(spec.phi_minus == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("restricted eigenvalues match the per-support SVD brute force") {
  auto d = random_fixed_design(6, 8, 17);
  auto spec = restricted_eigenvalues(d, 2);
  CHECK(spec.subsets_examined == 28);
  auto [lo, hi] = oracle::brute_force_restricted_eig(d.entries, 2);
  CHECK(spec.phi_minus == doctest::Approx(lo).epsilon(1e-9));
  CHECK(spec.phi_plus == doctest::Approx(hi).epsilon(1e-9));
}

TEST_CASE("restricted eigenvalue extremes nest across orders") {
  auto d = random_fixed_design(7, 9, 23);
  auto k1 = restricted_eigenvalues(d, 1);
  auto k2 = restricted_eigenvalues(d, 2);
  auto k3 = restricted_eigenvalues(d, 3);
  CHECK(k2.phi_minus <= k1.phi_minus);
  CHECK(k3.phi_minus <= k2.phi_minus);
  CHECK(k2.phi_plus >= k1.phi_plus);
  CHECK(k3.phi_plus >= k2.phi_plus);
}

TEST_CASE("normalized designs pin the order-1 extremes at n") {
  auto d = normalize_columns(random_fixed_design(9, 6, 29));
  auto spec = restricted_eigenvalues(d, 1);
  CHECK(spec.phi_minus == doctest::Approx(9.0).epsilon(1e-9));
  CHECK(spec.phi_plus == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("restricted eigenvalue budget and order guards") {
  auto d = random_fixed_design(4, 30, 31);
  CHECK_THROWS_WITH_AS(restricted_eigenvalues(d, 5, 1000), doctest::Contains("142506"),
                       budget_error);
  CHECK_THROWS_AS(restricted_eigenvalues(d, 31), std::invalid_argument);
}

TEST_CASE("projection fixed point, annihilation, and rank") {
  auto d = random_fixed_design(8, 5, 37);
  std::vector<int> m{1, 3};

  Eigen::VectorXd in_span = d.entries.col(0) * 2.0 - d.entries.col(2) * 0.5;
  auto [proj, rank] = project_onto_span(d, m, in_span);
  CHECK(rank == 2);
  CHECK((proj - in_span).norm() < 1e-9 * in_span.norm());

  // explicit orthogonal complement via the full QR of X_m
  Eigen::MatrixXd sub(8, 2);
  sub.col(0) = d.entries.col(0);
  sub.col(1) = d.entries.col(2);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd perp = q.col(5);
  auto [proj_perp, rank2] = project_onto_span(d, m, perp);
  CHECK(rank2 == 2);
  CHECK(proj_perp.norm() < 1e-9);

  CHECK_THROWS_AS(project_onto_span(d, {}, in_span), std::invalid_argument);
}

TEST_CASE("proportional columns collapse the projection rank") {
  auto d = random_fixed_design(6, 4, 41);
  d.entries.col(1) = 3.0 * d.entries.col(0);
  auto [proj, rank] = project_onto_span(d, {1, 2}, Eigen::VectorXd::Ones(6));
  CHECK(rank == 1);
  // idempotence
  auto [proj2, rank_again] = project_onto_span(d, {1, 2}, proj);
  CHECK(rank_again == 1);
  CHECK((proj2 - proj).norm() < 1e-9 * (1.0 + proj.norm()));
}

TEST_CASE("projection is contractive on random inputs") {
  auto d = random_fixed_design(10, 6, 43);
  GaussianSampler gauss(44, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd y(10);
    gauss.fill(y);
    auto [proj, rank] = project_onto_span(d, {2, 4, 5}, y);
    CHECK(proj.norm() <= y.norm() * (1.0 + 1e-12));
    (void)rank;
  }
}

TEST_CASE("hypercube vectors enumerate every support at the right height") {
  auto cube = hypercube_vectors(2, 4, std::sqrt(2.0));
  REQUIRE(cube.size() == 6);
  for (const auto& v : cube) {
    REQUIRE(v.sparsity() == 2);
    for (double value : v.values()) CHECK(value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.squared_norm() == doctest::Approx(2.0).epsilon(1e-12));
  }

  auto singles = hypercube_vectors(1, 3, 5.0);
  REQUIRE(singles.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(singles[j].support() == std::vector<int>{j + 1});
    CHECK(singles[j].values()[0] == doctest::Approx(5.0));
    CHECK(singles[j].squared_norm() == doctest::Approx(25.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(hypercube_vectors(3, 100, 1.0, 1000), budget_error);
}

TEST_CASE("experiment theta has amplitude u sqrt(log(p)/n) on the first k coordinates") {
  auto theta = make_theta_experiment(3, 5000, 50, 4.0);
  CHECK(theta.support() == std::vector<int>{1, 2, 3});
  // paper's first setting: approximately 1.65 for p = 5000
  CHECK(theta.values()[0] == doctest::Approx(4.0 * std::sqrt(std::log(5000.0) / 50.0))
                                 .epsilon(1e-12));
  CHECK(theta.values()[0] == doctest::Approx(1.65).epsilon(0.01));

  auto theta200 = make_theta_experiment(3, 200, 50, 4.0);
  CHECK(theta200.values()[0] == doctest::Approx(1.30).epsilon(0.01));

  // log(p) = 1 would give amplitude u exactly; with integer p check the formula
  auto small = make_theta_experiment(1, 3, 1, 1.0);
  CHECK(small.values()[0] == doctest::Approx(std::sqrt(std::log(3.0))).epsilon(1e-12));
}

TEST_CASE("sparse vector validation") {
  CHECK_THROWS_AS(SparseVector(5, {3, 2}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(5, {0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(5, {6}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(5, {1, 2}, {1.0}), std::invalid_argument);
  SparseVector ok(5, {2, 4}, {1.5, -2.0});
  Eigen::VectorXd dense = ok.dense();
  CHECK(dense(1) == 1.5);
  CHECK(dense(3) == -2.0);
  CHECK(dense(0) == 0.0);
}

TEST_CASE("design CSV fixture round trip") {
  auto d = normalize_columns(random_fixed_design(4, 3, 53));
  std::string text = design_to_csv(d);
  CHECK(text.rfind("# n=4,p=3,normalized=1", 0) == 0);
  auto back = design_from_csv(text);
  CHECK(back.n() == 4);
  CHECK(back.p() == 3);
  CHECK(back.normalized);
  CHECK((back.entries - d.entries).cwiseAbs().maxCoeff() < 1e-10);
}
