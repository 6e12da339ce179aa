#include "uhdreg/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace uhdreg {

namespace {

constexpr double kZeroRssRelTol = 1e-18;  // on the squared scale

// Minimum-norm least squares on the columns `cols` (0-based) of X.
// Returns coefficients (aligned with cols) and the residual sum of squares.
std::pair<Eigen::VectorXd, double> subset_ls(const Eigen::MatrixXd& X,
                                             const std::vector<int>& cols,
                                             const Eigen::VectorXd& y) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd sub(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(j) = X.col(cols[j]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(static_cast<int>(cols.size()));
  if (sv.size() > 0 && sv(0) > 0.0) {
    double cutoff = detail::rank_threshold(sv(0), n);
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) {
        coeff += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(y) / sv(i));
      }
    }
  }
  double rss = (y - sub * coeff).squaredNorm();
  return {coeff, rss};
}

int v_selector_kmax(int n, int p) { return std::min((n - 1) / 4, p); }

}  // namespace

std::pair<SparseVector, double> best_subset_ls(const Eigen::VectorXd& y,
                                               const DesignMatrix& X, int k,
                                               std::uint64_t budget) {
  const int n = X.n();
  const int p = X.p();
  if (k < 1 || k > std::min(n, p)) {
    throw std::invalid_argument("best_subset_ls: need 1 <= k <= min(n,p)");
  }
  if (y.size() != n) throw std::invalid_argument("best_subset_ls: length of y != n");
  check_subset_budget(p, k, budget);

  // RSS = ||y||^2 - ||Pi_m y||^2 for the least-squares fit, so scanning
  // projections suffices; the winning support is solved once at the end.
  double best_proj = -1.0;
  std::vector<int> best_cols;
  for_each_subset(p, k, [&](const std::vector<int>& cols) {
    auto [proj_sq, rank] = detail::projection_sq_norm(X.entries, cols, y);
    (void)rank;
    if (proj_sq > best_proj) {
      best_proj = proj_sq;
      best_cols = cols;
    }
  });

  auto [coeff, rss] = subset_ls(X.entries, best_cols, y);
  std::vector<int> support(k);
  std::vector<double> values(k);
  for (int j = 0; j < k; ++j) {
    support[j] = best_cols[j] + 1;
    values[j] = coeff(j);
  }
  return {SparseVector(p, std::move(support), std::move(values)), rss};
}

double pen_v(int k, int n, int p, double K) {
  if (K <= 0.0) throw std::invalid_argument("pen_v: need K > 0");
  if (k < 1 || k > (n - 1) / 4) {
    throw std::invalid_argument("pen_v: k must lie in 1..floor((n-1)/4), got k=" +
                                std::to_string(k));
  }
  return K * (static_cast<double>(k) / n) *
         std::log(std::exp(1.0) * static_cast<double>(p) / k);
}

SelectionResult select_v(const Eigen::VectorXd& y, const DesignMatrix& X, double K,
                         std::uint64_t budget) {
  const int n = X.n();
  const int p = X.p();
  if (n < 5) throw std::invalid_argument("select_v: need n >= 5 for a nonempty k-range");
  const int kmax = v_selector_kmax(n, p);
  for (int k = 1; k <= kmax; ++k) check_subset_budget(p, k, budget);
  const double y_sq = y.squaredNorm();

  SelectionResult result;
  result.selector = Selector::V;
  double best_criterion = std::numeric_limits<double>::infinity();
  int best_k = -1;
  SparseVector best_theta(p, {}, {});

  for (int k = 1; k <= kmax; ++k) {
    auto [theta, rss] = best_subset_ls(y, X, k, budget);
    result.rss_path.emplace_back(k, rss);
    if (rss <= kZeroRssRelTol * y_sq) {
      // log(0) is -inf: a zero-residual model dominates every criterion,
      // and the smallest such k wins.
      result.criterion_path.emplace_back(k, -std::numeric_limits<double>::infinity());
      best_k = k;
      best_theta = theta;
      best_criterion = -std::numeric_limits<double>::infinity();
      break;
    }
    double criterion = std::log(rss) + pen_v(k, n, p, K);
    result.criterion_path.emplace_back(k, criterion);
    if (criterion < best_criterion) {
      best_criterion = criterion;
      best_k = k;
      best_theta = theta;
    }
  }

  result.selected_k = best_k;
  result.criterion = best_criterion;
  result.rss = result.rss_path[best_k - 1].second;
  result.support = best_theta.support();
  result.theta_hat = best_theta.dense();
  return result;
}

int kstar_n(int n, int p) {
  if (n < 1 || p < 1) throw std::invalid_argument("kstar_n: need n,p >= 1");
  double target = static_cast<double>(n);
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 1;; ++k) {
    double value = k * (1.0 + std::log(static_cast<double>(p) / k));
    if (value >= target) return k;
    if (value <= prev) {
      // Past the peak at k = p without reaching the target: no solution.
      throw std::domain_error("kstar_n: no integer k satisfies k(1+log(p/k)) >= n for n=" +
                              std::to_string(n) + ", p=" + std::to_string(p));
    }
    prev = value;
  }
}

SelectionResult select_bm(const Eigen::VectorXd& y, const DesignMatrix& X,
                          double sigma2, std::uint64_t budget) {
  if (sigma2 <= 0.0) throw std::invalid_argument("select_bm: need sigma^2 > 0");
  const int n = X.n();
  const int p = X.p();
  const int kstar = std::min(kstar_n(n, p), std::min(n, p));
  for (int k = 1; k <= kstar; ++k) check_subset_budget(p, k, budget);

  SelectionResult result;
  result.selector = Selector::BM;
  double best_criterion = std::numeric_limits<double>::infinity();
  int best_k = -1;
  SparseVector best_theta(p, {}, {});
  double best_rss = 0.0;

  for (int k = 1; k <= kstar; ++k) {
    auto [theta, rss] = best_subset_ls(y, X, k, budget);
    double criterion = rss + sigma2 * 4.0 * k *
                                 (4.0 + std::log(static_cast<double>(p) / k));
    result.rss_path.emplace_back(k, rss);
    result.criterion_path.emplace_back(k, criterion);
    if (criterion < best_criterion) {
      best_criterion = criterion;
      best_k = k;
      best_theta = theta;
      best_rss = rss;
    }
  }

  auto [theta_full, rss_full] = full_ls(y, X);
  double criterion_full = rss_full + sigma2 * 2.0 * n;
  result.rss_path.emplace_back(n, rss_full);
  result.criterion_path.emplace_back(n, criterion_full);

  if (criterion_full < best_criterion) {
    result.selected_k = n;
    result.criterion = criterion_full;
    result.rss = rss_full;
    result.theta_hat = theta_full;
  } else {
    result.selected_k = best_k;
    result.criterion = best_criterion;
    result.rss = best_rss;
    result.support = best_theta.support();
    result.theta_hat = best_theta.dense();
  }
  return result;
}

std::pair<Eigen::VectorXd, double> full_ls(const Eigen::VectorXd& y,
                                           const DesignMatrix& X) {
  const int n = X.n();
  const int p = X.p();
  if (y.size() != n) throw std::invalid_argument("full_ls: length of y != n");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X.entries,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  if (sv.size() > 0 && sv(0) > 0.0) {
    double cutoff = detail::rank_threshold(sv(0), n);
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) {
        theta += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(y) / sv(i));
      }
    }
  }
  double rss = (y - X.entries * theta).squaredNorm();
  return {theta, rss};
}

}  // namespace uhdreg
