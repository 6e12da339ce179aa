#include "uhdreg/hypo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "uhdreg/dist.hpp"
#include "uhdreg/rng.hpp"

namespace uhdreg {

const char* procedure_name(Procedure p) {
  return p == Procedure::KnownVarianceStar ? "T_star" : "T_fisher";
}

namespace {

constexpr double kSaturationRelTol = 1e-18;  // on the squared residual

int smallest_k_reaching(double target, int p, const char* who) {
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 1;; ++k) {
    double value = k * (1.0 + std::log(static_cast<double>(p) / k));
    if (value >= target) return k;
    if (value <= prev) {
      throw std::domain_error(std::string(who) +
                              ": no integer k satisfies k(1+log(p/k)) >= target");
    }
    prev = value;
  }
}

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("test level must lie in (0,1)");
  }
}

}  // namespace

int kstar_sqrt(int n, int p) {
  if (n < 1 || p < 1) throw std::invalid_argument("kstar_sqrt: need n,p >= 1");
  return smallest_k_reaching(std::sqrt(static_cast<double>(n)), p, "kstar_sqrt");
}

TestReport test_known_variance(const Eigen::VectorXd& y, const DesignMatrix& X,
                               double sigma2, double alpha, std::uint64_t budget) {
  const int n = X.n();
  const int p = X.p();
  if (sigma2 <= 0.0) throw std::invalid_argument("test_known_variance: need sigma^2 > 0");
  require_level(alpha);
  if (y.size() != n) throw std::invalid_argument("test_known_variance: length of y != n");

  TestReport report;
  report.procedure = Procedure::KnownVarianceStar;
  report.alpha = alpha;
  const int kstar = kstar_sqrt(n, p);
  report.kstar = kstar;

  double best_margin = -std::numeric_limits<double>::infinity();

  // Subset statistics for 1 <= k < k*, each at level alpha/(2 k*). The
  // threshold depends on k only, so the sup over supports is taken first.
  const double alpha_sub = alpha / (2.0 * kstar);
  for (int k = 1; k < kstar && k <= p; ++k) check_subset_budget(p, k, budget);
  for (int k = 1; k < kstar && k <= p; ++k) {
    double sup_proj = -std::numeric_limits<double>::infinity();
    std::vector<int> sup_cols;
    for_each_subset(p, k, [&](const std::vector<int>& cols) {
      double proj_sq = detail::projection_sq_norm(X.entries, cols, y).first;
      if (proj_sq > sup_proj) {
        sup_proj = proj_sq;
        sup_cols = cols;
      }
    });
    double threshold =
        sigma2 * chi2_upper_quantile(k, alpha_sub / binomial_coefficient(p, k));
    report.statistics.push_back({k, sup_proj, threshold});
    if (sup_proj - threshold > best_margin) {
      best_margin = sup_proj - threshold;
      report.winning_k = k;
      std::vector<int> support(sup_cols.size());
      for (std::size_t i = 0; i < sup_cols.size(); ++i) support[i] = sup_cols[i] + 1;
      report.winning_support = std::move(support);
    }
  }

  // Full-dimensional statistic at level alpha/2.
  double stat_n = y.squaredNorm();
  double threshold_n = sigma2 * chi2_upper_quantile(n, alpha / 2.0);
  report.statistics.push_back({n, stat_n, threshold_n});
  if (stat_n - threshold_n > best_margin) {
    best_margin = stat_n - threshold_n;
    report.winning_k = n;
    report.winning_support.reset();
  }

  report.reject = best_margin > 0.0;
  return report;
}

double fisher_statistic(const Eigen::VectorXd& y, const DesignMatrix& X,
                        const std::vector<int>& m) {
  const int n = X.n();
  const int p = X.p();
  if (m.empty()) throw std::invalid_argument("fisher_statistic: empty index set");
  std::vector<int> cols(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 1 || m[i] > p) {
      throw std::invalid_argument("fisher_statistic: index out of 1..p");
    }
    cols[i] = m[i] - 1;
  }
  auto [proj_sq, rank] = detail::projection_sq_norm(X.entries, cols, y);
  if (rank == 0) throw std::invalid_argument("fisher_statistic: subdesign has rank 0");
  if (rank >= n) throw std::invalid_argument("fisher_statistic: need n - d_m > 0");
  double y_sq = y.squaredNorm();
  double resid_sq = y_sq - proj_sq;
  if (resid_sq <= kSaturationRelTol * y_sq) {
    return std::numeric_limits<double>::infinity();  // saturated fit
  }
  return (n - rank) * proj_sq / (rank * resid_sq);
}

TestReport test_unknown_variance(const Eigen::VectorXd& y, const DesignMatrix& X,
                                 double alpha, std::uint64_t budget,
                                 std::optional<int> k_cap) {
  const int n = X.n();
  const int p = X.p();
  if (n < 2) throw std::invalid_argument("test_unknown_variance: need n >= 2");
  require_level(alpha);
  if (y.size() != n) {
    throw std::invalid_argument("test_unknown_variance: length of y != n");
  }

  TestReport report;
  report.procedure = Procedure::UnknownVarianceFisher;
  report.alpha = alpha;
  const int half_n = n / 2;
  report.kstar = half_n;
  const double alpha_sub = alpha / half_n;  // Bonferroni split, fixed by n
  int k_top = std::min(half_n, p);
  if (k_cap) k_top = std::min(k_top, *k_cap);

  const double y_sq = y.squaredNorm();
  double best_margin = -std::numeric_limits<double>::infinity();

  for (int k = 1; k <= k_top; ++k) check_subset_budget(p, k, budget);
  for (int k = 1; k <= k_top; ++k) {
    const double level_k = alpha_sub / binomial_coefficient(p, k);
    std::map<int, double> quantile_by_rank;
    double best_stat_k = -std::numeric_limits<double>::infinity();
    double best_threshold_k = 0.0;
    double best_margin_k = -std::numeric_limits<double>::infinity();
    std::vector<int> best_cols_k;

    for_each_subset(p, k, [&](const std::vector<int>& cols) {
      auto [proj_sq, rank] = detail::projection_sq_norm(X.entries, cols, y);
      if (rank == 0 || rank >= n) return;
      double resid_sq = y_sq - proj_sq;
      double phi = resid_sq <= kSaturationRelTol * y_sq
                       ? std::numeric_limits<double>::infinity()
                       : (n - rank) * proj_sq / (rank * resid_sq);
      auto it = quantile_by_rank.find(rank);
      if (it == quantile_by_rank.end()) {
        it = quantile_by_rank
                 .emplace(rank, fisher_upper_quantile(rank, n - rank, level_k))
                 .first;
      }
      double margin = phi - it->second;
      if (margin > best_margin_k) {
        best_margin_k = margin;
        best_stat_k = phi;
        best_threshold_k = it->second;
        best_cols_k = cols;
      }
    });

    if (best_margin_k == -std::numeric_limits<double>::infinity()) continue;
    report.statistics.push_back({k, best_stat_k, best_threshold_k});
    if (best_margin_k > best_margin) {
      best_margin = best_margin_k;
      report.winning_k = k;
      std::vector<int> support(best_cols_k.size());
      for (std::size_t i = 0; i < best_cols_k.size(); ++i) support[i] = best_cols_k[i] + 1;
      report.winning_support = std::move(support);
    }
  }

  report.reject = best_margin > 0.0;
  return report;
}

SeparationEstimate estimate_separation_distance(
    const std::function<bool(const Eigen::VectorXd&)>& test_closure,
    const DesignMatrix& X, int k, double alpha, double delta, int replicates,
    std::uint64_t seed, double sigma, double bracket_cap, int bisection_iters) {
  const int n = X.n();
  const int p = X.p();
  if (k < 1 || k > p) throw std::invalid_argument("separation: need 1 <= k <= p");
  require_level(alpha);
  require_level(delta);
  if (replicates < 100) throw std::invalid_argument("separation: need >= 100 replicates");
  if (sigma <= 0.0) throw std::invalid_argument("separation: need sigma > 0");

  SeparationEstimate est;
  est.target_power = 1.0 - delta;
  est.alpha = alpha;
  est.replicates = replicates;
  est.design_descriptor = "design n=" + std::to_string(n) + " p=" + std::to_string(p) +
                          (X.normalized ? " normalized" : "");

  const double root_n = std::sqrt(static_cast<double>(n));
  const double inv_root_k = 1.0 / std::sqrt(static_cast<double>(k));

  // Common random numbers: replicate r always uses stream (seed, r), so
  // every candidate rho sees the same supports and noise draws.
  auto power_at = [&](double rho) {
    int rejections = 0;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd noise(n);
    std::vector<int> perm(p);
    for (int r = 0; r < replicates; ++r) {
      GaussianSampler gauss(seed, static_cast<std::uint64_t>(r));
      auto& eng = gauss.engine();
      // uniform size-k support via partial Fisher-Yates
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> pick(i, p - 1);
        std::swap(perm[i], perm[pick(eng)]);
      }
      gauss.fill(noise);
      theta.setZero();
      for (int i = 0; i < k; ++i) theta(perm[i]) = inv_root_k;
      double design_norm = (X.entries * theta).norm();
      bool reject = false;
      if (design_norm > 0.0) {
        double scale = rho * sigma * root_n / design_norm;
        Eigen::VectorXd signal = X.entries * (theta * scale);
        reject = test_closure(signal + sigma * noise);
      }
      rejections += reject ? 1 : 0;
    }
    double power = static_cast<double>(rejections) / replicates;
    est.trace.emplace_back(rho, power);
    return power;
  };

  double hi = bracket_cap;
  if (power_at(hi) < est.target_power) {
    throw std::runtime_error("separation: power stays below target up to the bracket cap " +
                             std::to_string(bracket_cap));
  }
  double lo = 0.0;
  for (int it = 0; it < bisection_iters; ++it) {
    double mid = 0.5 * (lo + hi);
    if (power_at(mid) >= est.target_power) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  est.bracket = {lo, hi};
  est.rho_hat = 0.5 * (lo + hi);
  return est;
}

}  // namespace uhdreg
