#ifndef UHDREG_SCREENING_HPP
#define UHDREG_SCREENING_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "uhdreg/design.hpp"

namespace uhdreg {

enum class ScreenMethod { SIS, LassoPath };

const char* screen_method_name(ScreenMethod m);

struct ScreeningResult {
  ScreenMethod method = ScreenMethod::SIS;
  /// Selected covariates, 1-based, in ranking order.
  std::vector<int> selected;
  /// Ranking value per selected index: |marginal correlation| for SIS,
  /// path-entry order (1, 2, ...) for the lasso path.
  std::vector<double> scores;
  int p0 = 0;
  /// True when the path ended before p0 entries and the remainder was
  /// padded by descending absolute residual correlation.
  bool padded = false;
};

/// Ranks covariates by |<y, X_j>| on columns standardized to norm sqrt(n)
/// and keeps the top p0. Zero-norm columns rank last with score 0.
/// Columns are not centered by default, matching a zero-mean design;
/// `center` subtracts column means first.
ScreeningResult sis_screen(const Eigen::VectorXd& y, const DesignMatrix& X, int p0,
                           bool center = false);

/// LARS path with the lasso modification (variables may leave the active
/// set and re-enter). Returns covariates in order of first entry, stopping
/// once max_entries distinct covariates have entered, the correlations
/// vanish, or the active Gram matrix turns numerically singular.
/// Requires columns normalized to sqrt(n) and max_entries <= min(n-1, p).
std::vector<int> lars_path(const Eigen::VectorXd& y, const DesignMatrix& X,
                           int max_entries);

/// The p0 covariates occurring first in the lasso regularization path,
/// padded deterministically if the path exhausts early.
ScreeningResult lasso_screen(const Eigen::VectorXd& y, const DesignMatrix& X, int p0);

/// |selected  intersect  true_support| / |true_support|.
double power_metric(const std::vector<int>& selected,
                    const std::vector<int>& true_support);

namespace detail {

struct LarsOutcome {
  std::vector<int> entries;        // 1-based, in first-entry order
  Eigen::VectorXd residual;        // residual at termination
  bool exhausted = false;          // path ended before max_entries
  bool watch_satisfied = false;    // every watched index has entered
};

/// Path driver. If watch is nonempty the path also stops as soon as every
/// watched index has entered (the screening power metric is then decided).
LarsOutcome lars_path_impl(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                           int max_entries, const std::vector<int>& watch);

}  // namespace detail

}  // namespace uhdreg

#endif
