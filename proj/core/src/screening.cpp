#include "uhdreg/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace uhdreg {

const char* screen_method_name(ScreenMethod m) {
  return m == ScreenMethod::SIS ? "sis" : "lasso";
}

ScreeningResult sis_screen(const Eigen::VectorXd& y, const DesignMatrix& X, int p0,
                           bool center) {
  const int n = X.n();
  const int p = X.p();
  if (p0 < 1 || p0 > p) throw std::invalid_argument("sis_screen: need 1 <= p0 <= p");
  if (y.size() != n) throw std::invalid_argument("sis_screen: length of y != n");

  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<double> score(p, 0.0);
  for (int j = 0; j < p; ++j) {
    if (center) {
      Eigen::VectorXd col = X.entries.col(j);
      col.array() -= col.mean();
      double norm = col.norm();
      score[j] = norm > 0.0 ? std::fabs(col.dot(y)) * root_n / norm : 0.0;
    } else {
      double norm = X.entries.col(j).norm();
      score[j] = norm > 0.0 ? std::fabs(X.entries.col(j).dot(y)) * root_n / norm : 0.0;
    }
  }

  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score[a] > score[b]; });

  ScreeningResult result;
  result.method = ScreenMethod::SIS;
  result.p0 = p0;
  result.selected.reserve(p0);
  result.scores.reserve(p0);
  for (int r = 0; r < p0; ++r) {
    result.selected.push_back(order[r] + 1);
    result.scores.push_back(score[order[r]]);
  }
  return result;
}

namespace detail {

LarsOutcome lars_path_impl(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                           int max_entries, const std::vector<int>& watch) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());

  LarsOutcome out;
  out.residual = y;
  if (max_entries <= 0) return out;

  std::vector<char> entered(p, 0);
  std::vector<char> watched(p, 0);
  int watch_left = 0;
  for (int idx : watch) {
    if (idx >= 1 && idx <= p && !watched[idx - 1]) {
      watched[idx - 1] = 1;
      ++watch_left;
    }
  }

  std::vector<int> active;          // 0-based column indices, entry order
  std::vector<char> in_active(p, 0);
  Eigen::VectorXd beta_active;      // aligned with `active`
  int last_dropped = -1;

  const double c_floor = 1e-11 * std::sqrt(static_cast<double>(n)) * y.norm();
  const int step_guard = 8 * std::min(n, p) + 16;

  auto record_entry = [&](int j) {
    if (!entered[j]) {
      entered[j] = 1;
      out.entries.push_back(j + 1);
      if (watched[j] && --watch_left == 0) {
        out.watch_satisfied = true;  // all watched are in
        return true;
      }
    }
    return static_cast<int>(out.entries.size()) >= max_entries;
  };

  for (int step = 0; step < step_guard; ++step) {
    Eigen::VectorXd c = X.transpose() * out.residual;

    // Reference correlation: the active set's common value, or the best
    // inactive one when starting out.
    double corr = 0.0;
    for (int i : active) corr = std::max(corr, std::fabs(c(i)));
    if (active.empty()) {
      for (int j = 0; j < p; ++j) corr = std::max(corr, std::fabs(c(j)));
    }
    if (corr <= c_floor) {
      out.exhausted = true;
      return out;
    }

    // Exactly tied correlations join together, lowest index first. A
    // variable dropped on the previous step sits at equality too and must
    // not bounce straight back in.
    for (int j = 0; j < p; ++j) {
      if (in_active[j] || j == last_dropped) continue;
      if (std::fabs(c(j)) >= corr * (1.0 - 1e-9)) {
        active.push_back(j);
        in_active[j] = 1;
        beta_active.conservativeResize(active.size());
        beta_active(static_cast<int>(active.size()) - 1) = 0.0;
        if (record_entry(j)) return out;
      }
    }
    last_dropped = -1;

    const int a = static_cast<int>(active.size());
    Eigen::VectorXd signs(a);
    for (int i = 0; i < a; ++i) signs(i) = c(active[i]) >= 0.0 ? 1.0 : -1.0;

    Eigen::MatrixXd gram(a, a);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j)
        gram(i, j) = X.col(active[i]).dot(X.col(active[j]));
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      out.exhausted = true;  // singular active Gram matrix
      return out;
    }
    Eigen::VectorXd w = llt.solve(signs);
    double s_dot_w = signs.dot(w);
    if (!(s_dot_w > 0.0)) {
      out.exhausted = true;
      return out;
    }
    double unit_scale = 1.0 / std::sqrt(s_dot_w);
    Eigen::VectorXd dir = unit_scale * w;  // step direction for beta_active
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < a; ++i) u += dir(i) * X.col(active[i]);
    // along u, every active |correlation| shrinks at rate unit_scale

    const double full_step = corr / unit_scale;  // correlations reach zero here
    const double step_floor = 1e-12 * full_step;
    double gamma = full_step;
    int enter_j = -1;
    Eigen::VectorXd xu = X.transpose() * u;
    for (int j = 0; j < p; ++j) {
      if (in_active[j]) continue;
      double aj = xu(j);
      double cj = c(j);
      double cand1_den = unit_scale - aj;
      if (std::fabs(cand1_den) > 1e-12 * unit_scale) {
        double cand = (corr - cj) / cand1_den;
        if (cand > step_floor && cand < gamma) {
          gamma = cand;
          enter_j = j;
        }
      }
      double cand2_den = unit_scale + aj;
      if (std::fabs(cand2_den) > 1e-12 * unit_scale) {
        double cand = (corr + cj) / cand2_den;
        if (cand > step_floor && cand < gamma) {
          gamma = cand;
          enter_j = j;
        }
      }
    }

    // Lasso modification: a coefficient crossing zero leaves the set first.
    int drop_i = -1;
    for (int i = 0; i < a; ++i) {
      if (dir(i) * beta_active(i) < 0.0) {
        double cand = -beta_active(i) / dir(i);
        if (cand > step_floor && cand < gamma) {
          gamma = cand;
          drop_i = i;
        }
      }
    }
    if (drop_i >= 0) enter_j = -1;

    beta_active += gamma * dir;
    out.residual -= gamma * u;

    if (drop_i >= 0) {
      last_dropped = active[drop_i];
      in_active[active[drop_i]] = 0;
      active.erase(active.begin() + drop_i);
      Eigen::VectorXd shrunk(a - 1);
      for (int i = 0, t = 0; i < a; ++i) {
        if (i != drop_i) shrunk(t++) = beta_active(i);
      }
      beta_active = shrunk;
    } else if (enter_j >= 0) {
      active.push_back(enter_j);
      in_active[enter_j] = 1;
      beta_active.conservativeResize(a + 1);
      beta_active(a) = 0.0;
      if (record_entry(enter_j)) return out;
    } else {
      out.exhausted = true;  // took the full step, correlations are zero
      return out;
    }
  }
  out.exhausted = true;  // step guard hit; report what was completed
  return out;
}

}  // namespace detail

std::vector<int> lars_path(const Eigen::VectorXd& y, const DesignMatrix& X,
                           int max_entries) {
  const int n = X.n();
  const int p = X.p();
  if (y.size() != n) throw std::invalid_argument("lars_path: length of y != n");
  if (max_entries < 1 || max_entries > std::min(n - 1, p)) {
    throw std::invalid_argument("lars_path: need 1 <= max_entries <= min(n-1, p)");
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int j = 0; j < p; ++j) {
    if (std::fabs(X.entries.col(j).norm() - root_n) > 1e-6 * root_n) {
      throw std::invalid_argument("lars_path: columns must be normalized to sqrt(n)");
    }
  }
  return detail::lars_path_impl(y, X.entries, max_entries, {}).entries;
}

ScreeningResult lasso_screen(const Eigen::VectorXd& y, const DesignMatrix& X, int p0) {
  const int n = X.n();
  const int p = X.p();
  if (p0 < 1 || p0 > p) throw std::invalid_argument("lasso_screen: need 1 <= p0 <= p");
  int max_entries = std::min(p0, std::min(n - 1, p));
  auto outcome = detail::lars_path_impl(y, X.entries, max_entries, {});

  ScreeningResult result;
  result.method = ScreenMethod::LassoPath;
  result.p0 = p0;
  result.selected = outcome.entries;
  result.scores.resize(result.selected.size());
  std::iota(result.scores.begin(), result.scores.end(), 1.0);

  if (static_cast<int>(result.selected.size()) < p0) {
    // Pad by descending absolute residual correlation at termination.
    result.padded = true;
    std::vector<char> taken(p, 0);
    for (int idx : result.selected) taken[idx - 1] = 1;
    Eigen::VectorXd c = X.entries.transpose() * outcome.residual;
    std::vector<int> rest;
    rest.reserve(p - result.selected.size());
    for (int j = 0; j < p; ++j) {
      if (!taken[j]) rest.push_back(j);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
      return std::fabs(c(a)) > std::fabs(c(b));
    });
    for (int j : rest) {
      if (static_cast<int>(result.selected.size()) >= p0) break;
      result.selected.push_back(j + 1);
      result.scores.push_back(static_cast<double>(result.selected.size()));
    }
  }
  return result;
}

double power_metric(const std::vector<int>& selected,
                    const std::vector<int>& true_support) {
  if (true_support.empty()) {
    throw std::invalid_argument("power_metric: empty true support");
  }
  std::vector<int> sorted_truth = true_support;
  std::sort(sorted_truth.begin(), sorted_truth.end());
  int hits = 0;
  for (int idx : selected) {
    if (std::binary_search(sorted_truth.begin(), sorted_truth.end(), idx)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(sorted_truth.size());
}

}  // namespace uhdreg
