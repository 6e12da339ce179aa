#ifndef UHDREG_TEST_ORACLES_HPP
#define UHDREG_TEST_ORACLES_HPP

// Independent reference computations used to freeze expected values.
// Everything here deliberately avoids the code paths under test: the
// chi-square tail uses the erfc/Poisson-sum recurrence instead of
// continued fractions, subset least squares goes through normal
// equations, and the lasso entry order comes from coordinate descent on
// a lambda grid.

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace oracle {

/// Upper tail of chi-square(d) via Q_1 = erfc, Q_2 = exp, and the
/// two-step recurrence Q_{d+2}(u) = Q_d(u) + term.
double chi2_upper_tail(int d, double u);

/// Bisection of the oracle tail for the upper quantile.
double chi2_upper_quantile(int d, double alpha);

/// Best size-k support by scanning all supports and solving normal
/// equations with a dense LU. Instances must make every subdesign
/// nonsingular. Returns (0-based support, rss).
std::pair<std::vector<int>, double> brute_force_subset_ls(const Eigen::MatrixXd& X,
                                                          const Eigen::VectorXd& y,
                                                          int k);

/// Hard-threshold solution for designs with orthogonal columns of norm
/// sqrt(n): keep the k largest |X^T y|/n coordinates. Returns rss.
double orthogonal_best_rss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k);

/// Restricted eigenvalue extremes by per-support singular values of X_m.
std::pair<double, double> brute_force_restricted_eig(const Eigen::MatrixXd& X, int k);

/// First-entry order of the lasso path from coordinate descent on a
/// fine descending lambda grid (1-based indices).
std::vector<int> lasso_entry_order_cd(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      int max_entries);

/// Exact P[W >= ceil(k x)] for W ~ Binomial(k, k/p), via the pmf
/// product recurrence (no lgamma).
double binomial_tail_exact(int k, int p, double x);

}  // namespace oracle

#endif
