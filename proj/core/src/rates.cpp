#include "uhdreg/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uhdreg {

RegimeVerdict classify_regime(int k, int n, int p) {
  if (k < 1 || k > p) throw std::invalid_argument("classify_regime: need 1 <= k <= p");
  if (n < 1) throw std::invalid_argument("classify_regime: need n >= 1");
  RegimeVerdict v;
  v.k = k;
  v.n = n;
  v.p = p;
  v.ratio = k * std::log(static_cast<double>(p) / k) / n;
  v.regime = v.ratio >= RegimeVerdict::threshold ? Regime::UltraHigh : Regime::Classical;
  return v;
}

RateValue rate_value(RateProblem problem, int k, int n, int p) {
  if (k < 1 || k > p || n < 1) {
    throw std::invalid_argument("rate_value: need 1 <= k <= p and n >= 1");
  }
  const double kd = k;
  const double nd = n;
  const double pd = p;
  const double klogp_n = kd * std::log(pd) / nd;
  const double klogpk_n = kd * std::log(pd / kd) / nd;

  RateValue r;
  r.problem = problem;
  switch (problem) {
    case RateProblem::PredictionFixed:
      r.value = std::min(klogpk_n, 1.0);
      r.formula_id = "prediction_fixed: (k/n) log(p/k) ^ 1";
      break;
    case RateProblem::PredictionRandom:
      r.value = klogpk_n * std::exp(klogpk_n);
      r.formula_id = "prediction_random: (k/n) log(p/k) exp[(k/n) log(p/k)]";
      break;
    case RateProblem::TestKnownVar:
      r.value = std::min(klogp_n, 1.0 / std::sqrt(nd));
      r.formula_id = "test_known_var: k log(p)/n ^ 1/sqrt(n)";
      break;
    case RateProblem::TestUnknownVar:
      r.value = klogp_n * std::exp(klogp_n);
      r.formula_id = "test_unknown_var: k log(p)/n exp[k log(p)/n]";
      break;
    case RateProblem::InverseFixed:
      if (kd * std::log(pd) <= nd) {
        r.value = klogpk_n;
        r.formula_id = "inverse_fixed: (k/n) log(p/k)";
      } else {
        r.value = std::exp(klogpk_n);
        r.formula_id = "inverse_fixed_ultra: exp[(k/n) log(p/k)]";
      }
      break;
    default:
      throw std::invalid_argument("rate_value: unknown problem");
  }
  return r;
}

double test_unknown_var_rate_logepk(int k, int n, int p) {
  if (k < 1 || k > p || n < 1) {
    throw std::invalid_argument("rate: need 1 <= k <= p and n >= 1");
  }
  double v = k * std::log(std::exp(1.0) * static_cast<double>(p) / k) / n;
  return v * std::exp(v);
}

LowerBoundCertificate second_moment_certificate(double rho, int k, int n, int p,
                                                double eta) {
  if (k < 1 || k > p) throw std::invalid_argument("certificate: need 1 <= k <= p");
  if (n < 1) throw std::invalid_argument("certificate: need n >= 1");
  if (rho < 0.0) throw std::invalid_argument("certificate: need rho >= 0");
  if (!(eta > 0.0 && eta < 2.0)) {
    throw std::invalid_argument("certificate: need eta in (0,2)");
  }

  const double rho2 = rho * rho;
  const double shrink = rho2 / (1.0 + rho2);  // in [0,1)
  const double q = static_cast<double>(k) / p;
  const double log_q = std::log(q);
  const double log_1mq = q < 1.0 ? std::log1p(-q) : -std::numeric_limits<double>::infinity();

  double moment = 0.0;
  for (int w = 0; w <= k; ++w) {
    double base = 1.0 - shrink * w / k;
    if (base <= 0.0) {
      throw std::domain_error("certificate: integrand singular at w=" + std::to_string(w));
    }
    double log_pmf;
    if (q >= 1.0) {
      log_pmf = w == k ? 0.0 : -std::numeric_limits<double>::infinity();
    } else {
      log_pmf = std::lgamma(k + 1.0) - std::lgamma(w + 1.0) - std::lgamma(k - w + 1.0) +
                w * log_q + (k - w) * log_1mq;
    }
    moment += std::exp(log_pmf - n * std::log(base));
  }

  LowerBoundCertificate cert;
  cert.rho_squared = rho2;
  cert.eta = eta;
  cert.second_moment_bound = moment;
  cert.satisfied = moment <= 1.0 + eta * eta;
  return cert;
}

LowerBoundCertificate lower_bound_radius(int k, int n, int p, double alpha,
                                         double delta) {
  if (k < 1 || n < 1 || p < 1) {
    throw std::invalid_argument("lower_bound_radius: need k,n,p >= 1");
  }
  if (alpha <= 0.0 || delta <= 0.0 || alpha + delta > 0.53) {
    throw std::invalid_argument("lower_bound_radius: needs alpha,delta > 0 and alpha+delta <= 0.53");
  }
  if (std::pow(static_cast<double>(k), 3) > static_cast<double>(p) * (1.0 + 1e-12)) {
    throw std::invalid_argument("lower_bound_radius: needs k <= p^(1/3)");
  }

  const double eta = 2.0 * (1.0 - alpha - delta);
  const double kd = k;
  const double nd = n;
  const double pd = p;

  double small_dim = (kd / (2.0 * nd)) * std::log1p(pd / (kd * kd));
  bool a1 = (kd / nd) * std::log(pd / (std::exp(3.0) * kd * kd)) >= 2.0;
  double radius = small_dim;
  auto formula = LowerBoundCertificate::Formula::SmallDim;
  if (a1) {
    double large_dim = -1.0 + std::pow(pd / (2.0 * std::exp(1.0) * kd), kd / nd) *
                                  std::pow(4.0 * kd, -2.0 / nd);
    if (large_dim > radius) {
      radius = large_dim;
      formula = LowerBoundCertificate::Formula::LargeDim;
    }
  }

  LowerBoundCertificate cert = second_moment_certificate(std::sqrt(radius), k, n, p, eta);
  cert.regime_formula = formula;
  cert.condition_a1 = a1;
  return cert;
}

}  // namespace uhdreg
