#ifndef UHDREG_RATES_HPP
#define UHDREG_RATES_HPP

#include <string>

namespace uhdreg {

enum class Regime { Classical, UltraHigh };

/// Rule of thumb: a problem is ultra-high dimensional when
/// k * log(p/k) / n >= 1/2.
struct RegimeVerdict {
  int k = 0;
  int n = 0;
  int p = 0;
  double ratio = 0.0;
  Regime regime = Regime::Classical;
  static constexpr double threshold = 0.5;
};

RegimeVerdict classify_regime(int k, int n, int p);

enum class RateProblem {
  PredictionFixed,
  PredictionRandom,
  TestKnownVar,
  TestUnknownVar,
  InverseFixed,
};

/// A minimax rate functional evaluated with every unspecified constant
/// set to 1. formula_id names the formula so callers can rescale.
struct RateValue {
  RateProblem problem = RateProblem::PredictionFixed;
  double value = 0.0;
  std::string formula_id;
};

RateValue rate_value(RateProblem problem, int k, int n, int p);

/// The unknown-variance separation rate written with log(ep/k) instead of
/// log(p); for k <= p^(1/3) the two are of the same order.
double test_unknown_var_rate_logepk(int k, int n, int p);

/// A computable lower-bound certificate: a candidate squared separation
/// radius together with the exact second moment of the mixture likelihood
/// ratio it induces. Values at most 1 + eta^2 certify indistinguishability.
struct LowerBoundCertificate {
  double rho_squared = 0.0;
  double eta = 0.0;  // 2 (1 - alpha - delta)
  double second_moment_bound = 0.0;
  bool satisfied = false;
  enum class Formula { SmallDim, LargeDim };
  Formula regime_formula = Formula::SmallDim;
  bool condition_a1 = false;
};

/// Explicit admissible radii: rho^2 = (k/2n) log(1 + p/k^2) always, and
/// rho^2 = -1 + (p/(2ek))^(k/n) (4k)^(-2/n) when (k/n) log(p/(e^3 k^2)) >= 2.
/// Returns the larger admissible radius, cross-checked against the exact
/// second-moment certificate. Requires alpha + delta <= 0.53 and k <= p^(1/3).
LowerBoundCertificate lower_bound_radius(int k, int n, int p, double alpha,
                                         double delta);

/// Exact second moment E_W[(1 - rho^2 W / ((1+rho^2) k))^(-n)] for
/// W ~ Binomial(k, k/p), summed over w = 0..k.
LowerBoundCertificate second_moment_certificate(double rho, int k, int n, int p,
                                                double eta);

}  // namespace uhdreg

#endif
