#ifndef UHDREG_ESTIMATORS_HPP
#define UHDREG_ESTIMATORS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "uhdreg/design.hpp"

namespace uhdreg {

enum class Selector { V, BM, FixedK, FullLS };

struct SelectionResult {
  Selector selector = Selector::FixedK;
  int selected_k = 0;
  /// Dense coefficient vector of the selected model.
  Eigen::VectorXd theta_hat;
  /// 1-based support of the selected model; empty for the full
  /// least-squares entry (every coordinate is free there).
  std::vector<int> support;
  double rss = 0.0;
  double criterion = 0.0;
  std::vector<std::pair<int, double>> rss_path;
  std::vector<std::pair<int, double>> criterion_path;
};

/// Exhaustive k-sparse least squares: minimizes the residual sum of
/// squares over every size-k support, solving each support by
/// minimum-norm least squares. Ties go to the lexicographically
/// smallest support.
std::pair<SparseVector, double> best_subset_ls(const Eigen::VectorXd& y,
                                               const DesignMatrix& X, int k,
                                               std::uint64_t budget = kDefaultSubsetBudget);

/// Variance-free complexity penalty K * (k/n) * log(e p / k), defined for
/// 1 <= k <= floor((n-1)/4).
double pen_v(int k, int n, int p, double K);

/// Model selection by penalized log-RSS; needs no noise variance.
/// A zero-residual model short-circuits selection to the smallest such k.
SelectionResult select_v(const Eigen::VectorXd& y, const DesignMatrix& X,
                         double K = 3.0, std::uint64_t budget = kDefaultSubsetBudget);

/// Smallest integer k with k * (1 + log(p/k)) >= n. Throws if no integer
/// satisfies the inequality (possible only when p < n).
int kstar_n(int n, int p);

/// Known-variance selector over k in {1..k*} and the full model, with
/// penalty 4k(4 + log(p/k)) for sparse entries and 2n for the full one.
SelectionResult select_bm(const Eigen::VectorXd& y, const DesignMatrix& X,
                          double sigma2, std::uint64_t budget = kDefaultSubsetBudget);

/// Minimum-norm full least squares and its residual sum of squares.
std::pair<Eigen::VectorXd, double> full_ls(const Eigen::VectorXd& y,
                                           const DesignMatrix& X);

}  // namespace uhdreg

#endif
