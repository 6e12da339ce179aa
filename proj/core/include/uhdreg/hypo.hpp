#ifndef UHDREG_HYPO_HPP
#define UHDREG_HYPO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "uhdreg/design.hpp"

namespace uhdreg {

enum class Procedure { KnownVarianceStar, UnknownVarianceFisher };

const char* procedure_name(Procedure p);

struct TestReport {
  Procedure procedure = Procedure::KnownVarianceStar;
  double alpha = 0.0;
  bool reject = false;
  std::optional<int> winning_k;
  std::optional<std::vector<int>> winning_support;  // 1-based
  struct Row {
    int k;             // subset size, or n for the full-dimensional statistic
    double statistic;  // best statistic at this k
    double threshold;  // its rejection threshold
  };
  std::vector<Row> statistics;
  int kstar = 0;  // procedure-specific dimension cutoff
};

/// Smallest integer k with k * (1 + log(p/k)) >= sqrt(n). Throws if no
/// integer satisfies the inequality (possible only for p far below n).
int kstar_sqrt(int n, int p);

/// Known-variance adaptive test: for each 1 <= k < k*, the Bonferroni
/// subset statistic sup_m ||Pi_m y||^2 minus a chi-square threshold at
/// level (alpha/2k*)/C(p,k), combined with the full-dimensional statistic
/// ||y||^2 at level alpha/2. Rejects iff any statistic is positive.
TestReport test_known_variance(const Eigen::VectorXd& y, const DesignMatrix& X,
                               double sigma2, double alpha,
                               std::uint64_t budget = kDefaultSubsetBudget);

/// Fisher statistic of a support m (1-based):
/// (n - d_m) ||Pi_m y||^2 / (d_m ||y - Pi_m y||^2).
/// Returns +inf when the residual is numerically zero (saturated fit);
/// throws when the subdesign has rank zero.
double fisher_statistic(const Eigen::VectorXd& y, const DesignMatrix& X,
                        const std::vector<int>& m);

/// Variance-free adaptive test: sup over subset sizes k of the best
/// Fisher margin phi_m - qF(d_m, n-d_m; (alpha/floor(n/2))/C(p,k)).
/// The Bonferroni split is always over floor(n/2) sizes; `k_cap` limits
/// which sizes are actually enumerated (a capped run is conservative,
/// its level guarantee is unchanged).
TestReport test_unknown_variance(const Eigen::VectorXd& y, const DesignMatrix& X,
                                 double alpha,
                                 std::uint64_t budget = kDefaultSubsetBudget,
                                 std::optional<int> k_cap = std::nullopt);

struct SeparationEstimate {
  double rho_hat = 0.0;
  double target_power = 0.0;  // 1 - delta
  double alpha = 0.0;
  int replicates = 0;
  std::pair<double, double> bracket{0.0, 0.0};
  std::string design_descriptor;
  /// (rho candidate, estimated power) in evaluation order.
  std::vector<std::pair<double, double>> trace;
};

/// Monte-Carlo estimate of the separation distance of a test: bisects on
/// the signal scale rho, drawing theta_0 uniformly from the hypercube
/// alternatives rescaled so that ||X theta_0|| / sqrt(n) = rho * sigma,
/// with common random numbers across candidates. Finds the smallest rho
/// whose estimated rejection power reaches 1 - delta.
SeparationEstimate estimate_separation_distance(
    const std::function<bool(const Eigen::VectorXd&)>& test_closure,
    const DesignMatrix& X, int k, double alpha, double delta, int replicates,
    std::uint64_t seed, double sigma = 1.0, double bracket_cap = 32.0,
    int bisection_iters = 20);

}  // namespace uhdreg

#endif
