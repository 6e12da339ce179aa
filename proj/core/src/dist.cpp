#include "uhdreg/dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "uhdreg/rng.hpp"

namespace uhdreg {

namespace {

// Regularized incomplete gamma functions, series for x < a+1 and Lentz
// continued fraction beyond, each accurate where the other degrades.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// P[Gamma(a,1) <= x]
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_continued_fraction(a, x);
}

// P[Gamma(a,1) > x]
double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_continued_fraction(a, x);
}

double beta_continued_fraction(double a, double b, double x) {
  const double tiny = 1e-300;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a,b).
double beta_i(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Bracketed bisection for the u with upper_tail(u) = alpha. upper_tail
// must be nonincreasing in u on [0, inf).
template <typename F>
double invert_upper_tail(F&& upper_tail, double alpha, double hi_start) {
  double lo = 0.0;
  double hi = hi_start;
  while (upper_tail(hi) > alpha) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("quantile bracket overflow");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (upper_tail(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("tail level must lie in (0,1)");
  }
}

double log1p_safe(double v) { return std::log1p(v); }

double binomial_log_pmf(int k, int w, double q) {
  if (q <= 0.0) return w == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (q >= 1.0) return w == k ? 0.0 : -std::numeric_limits<double>::infinity();
  double lchoose = std::lgamma(k + 1.0) - std::lgamma(w + 1.0) - std::lgamma(k - w + 1.0);
  return lchoose + w * std::log(q) + (k - w) * log1p_safe(-q);
}

}  // namespace

double chi2_upper_tail(int d, double u) {
  if (d < 1) throw std::invalid_argument("chi2: need d >= 1");
  return gamma_q(0.5 * d, 0.5 * u);
}

double chi2_upper_quantile(int d, double alpha) {
  if (d < 1) throw std::invalid_argument("chi2: need d >= 1");
  require_level(alpha);
  return invert_upper_tail([d](double u) { return chi2_upper_tail(d, u); }, alpha,
                           std::max(2.0, static_cast<double>(d)));
}

double fisher_upper_tail(int d1, int d2, double u) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("fisher: need d1,d2 >= 1");
  if (u <= 0.0) return 1.0;
  return beta_i(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * u));
}

double fisher_upper_quantile(int d1, int d2, double alpha) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("fisher: need d1,d2 >= 1");
  require_level(alpha);
  return invert_upper_tail([d1, d2](double u) { return fisher_upper_tail(d1, d2, u); },
                           alpha, 2.0);
}

Chi2Thresholds chi2_deviation_thresholds(int d, double x) {
  if (d < 1) throw std::invalid_argument("chi2 thresholds: need d >= 1");
  require_level(x);
  double L = std::log(1.0 / x);
  Chi2Thresholds t;
  t.upper = d + 2.0 * std::sqrt(d * L) + 2.0 * L;
  t.lower = d - 2.0 * std::sqrt(d * L);
  t.small_ball = d * std::exp(-1.0) * std::pow(x, 2.0 / d);
  return t;
}

WishartThresholds wishart_deviation_thresholds(int n, int d, double x,
                                               bool want_small_ball,
                                               double small_ball_constant) {
  if (d < 1 || n <= d) throw std::invalid_argument("wishart thresholds: need n > d >= 1");
  require_level(x);
  double root_ratio = std::sqrt(static_cast<double>(d) / n);
  double dev = std::sqrt(2.0 * std::log(1.0 / x) / n);
  WishartThresholds t;
  double up = 1.0 + root_ratio + dev;
  t.max_threshold = n * up * up;
  double down = std::max(0.0, 1.0 - root_ratio - dev);
  t.min_threshold = n * down * down;
  if (want_small_ball) {
    if (n < 4 * d + 1) {
      throw std::invalid_argument("wishart small-ball bound needs n >= 4d+1");
    }
    double damp = std::max(1.0, std::log(2.0 / x) / n);
    t.small_ball = n * small_ball_constant * std::pow(x, 2.0 / (n - 2 * d)) / damp;
  }
  return t;
}

double hypergeom_tail_bound(int k, int p, double x) {
  if (k < 1 || k > p) throw std::invalid_argument("hypergeom bound: need 1 <= k <= p");
  if (!(x > 0.0 && x <= 1.0)) {
    throw std::invalid_argument("hypergeom bound: need x in (0,1]");
  }
  double ratio = static_cast<double>(k) / p;
  if (x == 1.0) return std::pow(ratio, k);
  double log_bound = x * std::log(ratio / x) - (1.0 - x) * log1p_safe(-x);
  return std::exp(k * log_bound);
}

double binomial_surrogate_tail(int k, int p, double x) {
  if (k < 1 || k > p) throw std::invalid_argument("binomial tail: need 1 <= k <= p");
  double q = static_cast<double>(k) / p;
  int w0 = static_cast<int>(std::ceil(k * x - 1e-12));
  w0 = std::max(w0, 0);
  double tail = 0.0;
  for (int w = w0; w <= k; ++w) tail += std::exp(binomial_log_pmf(k, w, q));
  return std::min(tail, 1.0);
}

const char* tail_bound_name(TailBound b) {
  switch (b) {
    case TailBound::Chi2Upper: return "chi2_upper";
    case TailBound::Chi2Lower: return "chi2_lower";
    case TailBound::Chi2SmallBall: return "chi2_small_ball";
    case TailBound::WishartMax: return "wishart_max";
    case TailBound::WishartMin: return "wishart_min";
    case TailBound::WishartSmallBall: return "wishart_small_ball";
    case TailBound::HypergeomUpper: return "hypergeom_upper";
  }
  return "unknown";
}

namespace {

int required_int_param(const std::map<std::string, double>& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument(std::string("verify_tail_bound: missing parameter ") + key);
  }
  return static_cast<int>(it->second);
}

}  // namespace

TailBoundReport verify_tail_bound(TailBound bound_name,
                                  const std::map<std::string, double>& parameters,
                                  double x, std::uint64_t replicates,
                                  std::uint64_t seed) {
  require_level(x);
  TailBoundReport report;
  report.bound_name = bound_name;
  report.parameters = parameters;
  report.x = x;

  if (bound_name == TailBound::HypergeomUpper) {
    // Exact pmf summation; no simulation and no Monte-Carlo slack.
    int k = required_int_param(parameters, "k");
    int p = required_int_param(parameters, "p");
    report.threshold = hypergeom_tail_bound(k, p, x);
    double exact = binomial_surrogate_tail(k, p, x);
    report.empirical_exceedance = exact;
    report.pass = exact <= report.threshold;
    return report;
  }

  if (replicates < 1000) {
    throw std::invalid_argument("verify_tail_bound: need at least 1000 replicates");
  }
  report.replicates = replicates;
  GaussianSampler gauss(seed, 0);
  std::uint64_t exceed = 0;

  switch (bound_name) {
    case TailBound::Chi2Upper:
    case TailBound::Chi2Lower:
    case TailBound::Chi2SmallBall: {
      int d = required_int_param(parameters, "d");
      Chi2Thresholds t = chi2_deviation_thresholds(d, x);
      double threshold = bound_name == TailBound::Chi2Upper   ? t.upper
                         : bound_name == TailBound::Chi2Lower ? t.lower
                                                              : t.small_ball;
      report.threshold = threshold;
      for (std::uint64_t r = 0; r < replicates; ++r) {
        double sum = 0.0;
        for (int i = 0; i < d; ++i) {
          double z = gauss();
          sum += z * z;
        }
        bool event = bound_name == TailBound::Chi2Upper ? sum >= threshold
                                                        : sum <= threshold;
        exceed += event ? 1 : 0;
      }
      break;
    }
    case TailBound::WishartMax:
    case TailBound::WishartMin:
    case TailBound::WishartSmallBall: {
      int n = required_int_param(parameters, "n");
      int d = required_int_param(parameters, "d");
      double c = 1.0;
      if (auto it = parameters.find("c"); it != parameters.end()) c = it->second;
      WishartThresholds t = wishart_deviation_thresholds(
          n, d, x, bound_name == TailBound::WishartSmallBall, c);
      double threshold = bound_name == TailBound::WishartMax   ? t.max_threshold
                         : bound_name == TailBound::WishartMin ? t.min_threshold
                                                               : *t.small_ball;
      report.threshold = threshold;
      report.informational = bound_name == TailBound::WishartSmallBall;
      Eigen::MatrixXd z(n, d);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
      for (std::uint64_t r = 0; r < replicates; ++r) {
        gauss.fill(z);
        eig.compute(z.transpose() * z, Eigen::EigenvaluesOnly);
        double stat = bound_name == TailBound::WishartMax ? eig.eigenvalues().maxCoeff()
                                                          : eig.eigenvalues().minCoeff();
        bool event = bound_name == TailBound::WishartMax ? stat >= threshold
                                                         : stat <= threshold;
        exceed += event ? 1 : 0;
      }
      break;
    }
    default:
      throw std::invalid_argument("verify_tail_bound: unknown bound");
  }

  double rate = static_cast<double>(exceed) / static_cast<double>(replicates);
  report.empirical_exceedance = rate;
  double slack = 3.0 * std::sqrt(x * (1.0 - x) / static_cast<double>(replicates));
  report.pass = rate <= x + slack;
  return report;
}

}  // namespace uhdreg
