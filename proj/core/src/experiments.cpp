#include "uhdreg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "uhdreg/csv.hpp"
#include "uhdreg/design.hpp"
#include "uhdreg/parallel.hpp"
#include "uhdreg/rng.hpp"
#include "uhdreg/svg.hpp"

namespace uhdreg {

namespace {

ExperimentKind parse_kind(const std::string& name) {
  if (name == "power_vs_k") return ExperimentKind::PowerVsK;
  if (name == "min_signal") return ExperimentKind::MinSignal;
  if (name == "test_level") return ExperimentKind::TestLevel;
  if (name == "separation") return ExperimentKind::TestSeparation;
  if (name == "tail_bounds") return ExperimentKind::TailBounds;
  throw config_error("unknown experiment: " + name);
}

struct ReplicateData {
  DesignMatrix design;           // raw Gaussian draw
  Eigen::VectorXd noise;
};

// Replicate r draws its design from stream 2r and its noise from stream
// 2r+1, so every u candidate and every method sees the same data.
ReplicateData draw_replicate(const ExperimentConfig& config, int r) {
  ReplicateData data;
  std::uint64_t design_stream = config.redraw_design ? 2 * static_cast<std::uint64_t>(r) : 0;
  data.design = generate_gaussian_design(config.n, config.p, config.seed, design_stream);
  GaussianSampler gauss(config.seed, 2 * static_cast<std::uint64_t>(r) + 1);
  data.noise.resize(config.n);
  gauss.fill(data.noise);
  return data;
}

Eigen::VectorXd response_for(const ExperimentConfig& config, const ReplicateData& data,
                             int k, double u) {
  double amplitude = u * std::sqrt(std::log(static_cast<double>(config.p)) / config.n);
  return amplitude * data.design.entries.leftCols(k).rowwise().sum() +
         config.sigma * data.noise;
}

std::vector<int> first_k_indices(int k) {
  std::vector<int> truth(k);
  std::iota(truth.begin(), truth.end(), 1);
  return truth;
}

double lasso_power_one(const ExperimentConfig& config, const DesignMatrix& normalized,
                       const Eigen::VectorXd& y, int k) {
  const std::vector<int> truth = first_k_indices(k);
  int max_entries = std::min(config.p0, std::min(config.n - 1, config.p));
  auto outcome = detail::lars_path_impl(y, normalized.entries, max_entries, truth);
  if (outcome.watch_satisfied) return 1.0;  // whole support entered early
  std::vector<int> selected = outcome.entries;
  if (static_cast<int>(selected.size()) < config.p0) {
    // same padding rule as lasso_screen: descending residual correlation
    std::vector<char> taken(config.p, 0);
    for (int idx : selected) taken[idx - 1] = 1;
    Eigen::VectorXd c = normalized.entries.transpose() * outcome.residual;
    std::vector<int> rest;
    for (int j = 0; j < config.p; ++j) {
      if (!taken[j]) rest.push_back(j);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
      return std::fabs(c(a)) > std::fabs(c(b));
    });
    for (int j : rest) {
      if (static_cast<int>(selected.size()) >= config.p0) break;
      selected.push_back(j + 1);
    }
  }
  return power_metric(selected, truth);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (static_cast<double>(v.size()) * (v.size() - 1)));
}

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& kv) {
  ExperimentConfig c;
  c.experiment = parse_kind(kv.get_string("experiment", "power_vs_k"));
  c.n = static_cast<int>(kv.get_int("n", c.n));
  c.p = static_cast<int>(kv.get_int("p", c.p));
  if (kv.has("k_grid")) c.k_grid = kv.get_int_list("k_grid");
  c.replicates = static_cast<int>(kv.get_int("replicates", c.replicates));
  c.amplitude_u = kv.get_double("amplitude_u", c.amplitude_u);
  c.target_power = kv.get_double("target_power", c.target_power);
  c.u_bracket_lo = kv.get_double("u_lo", c.u_bracket_lo);
  c.u_bracket_hi = kv.get_double("u_hi", c.u_bracket_hi);
  c.bisection_iters = static_cast<int>(kv.get_int("bisection_iters", c.bisection_iters));
  c.p0 = static_cast<int>(kv.get_int("p0", c.p0));
  if (kv.has("methods")) {
    c.methods.clear();
    for (const std::string& name : kv.get_string_list("methods")) {
      if (name == "sis") {
        c.methods.push_back(ScreenMethod::SIS);
      } else if (name == "lasso") {
        c.methods.push_back(ScreenMethod::LassoPath);
      } else {
        throw config_error("unknown screening method: " + name);
      }
    }
  }
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long long>(c.seed)));
  c.output_dir = kv.get_string("out", c.output_dir);
  c.sigma = kv.get_double("sigma", c.sigma);
  c.alpha = kv.get_double("alpha", c.alpha);
  c.delta = kv.get_double("delta", c.delta);
  c.redraw_design = kv.get_bool("redraw_design", c.redraw_design);
  c.budget = static_cast<std::uint64_t>(kv.get_int("budget", static_cast<long long>(c.budget)));
  if (kv.has("test_k_cap")) {
    long long cap = kv.get_int("test_k_cap");
    if (cap <= 0) {
      c.test_k_cap.reset();  // 0 disables the cap
    } else {
      c.test_k_cap = static_cast<int>(cap);
    }
  }
  if (kv.has("procedure")) {
    std::string name = kv.get_string("procedure");
    if (name == "star" || name == "known_variance") {
      c.separation_procedure = Procedure::KnownVarianceStar;
    } else if (name == "fisher" || name == "unknown_variance") {
      c.separation_procedure = Procedure::UnknownVarianceFisher;
    } else {
      throw config_error("unknown procedure: " + name);
    }
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (n < 1 || p < 1) throw config_error("need n >= 1 and p >= 1");
  if (replicates < 1) throw config_error("need replicates >= 1");
  if (k_grid.empty()) throw config_error("k_grid must be nonempty");
  for (int k : k_grid) {
    if (k < 1 || k > std::min(n, p)) {
      throw config_error("k_grid entry " + std::to_string(k) +
                         " outside 1..min(n,p)");
    }
  }
  if (p0 < 1 || p0 > p) throw config_error("need 1 <= p0 <= p");
  if (methods.empty()) throw config_error("methods must be nonempty");
  if (!(sigma > 0.0)) throw config_error("need sigma > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("need alpha in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw config_error("need delta in (0,1)");
  if (!(target_power > 0.0 && target_power < 1.0)) {
    throw config_error("need target_power in (0,1)");
  }
  if (!(u_bracket_lo > 0.0 && u_bracket_lo < u_bracket_hi)) {
    throw config_error("need 0 < u_lo < u_hi");
  }
  if (bisection_iters < 1) throw config_error("need bisection_iters >= 1");
}

namespace detail {

std::vector<double> screening_power_replicates(const ExperimentConfig& config,
                                               ScreenMethod method, int k, double u) {
  std::vector<double> samples(config.replicates, 0.0);
  parallel_for(config.replicates, [&](int r) {
    ReplicateData data = draw_replicate(config, r);
    Eigen::VectorXd y = response_for(config, data, k, u);
    if (method == ScreenMethod::SIS) {
      auto result = sis_screen(y, data.design, config.p0);
      samples[r] = power_metric(result.selected, first_k_indices(k));
    } else {
      DesignMatrix normalized = normalize_columns(data.design);
      samples[r] = lasso_power_one(config, normalized, y, k);
    }
  });
  return samples;
}

}  // namespace detail

std::vector<PowerCurve> run_power_vs_k(const ExperimentConfig& config) {
  config.validate();
  std::vector<PowerCurve> curves;
  for (ScreenMethod method : config.methods) {
    PowerCurve curve;
    curve.method = method;
    curve.replicates = config.replicates;
    curve.n = config.n;
    curve.p = config.p;
    curve.p0 = config.p0;
    curve.amplitude_u = config.amplitude_u;
    curve.degenerate_replication = config.replicates == 1;
    curves.push_back(std::move(curve));
  }

  for (int k : config.k_grid) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      std::vector<double> samples = detail::screening_power_replicates(
          config, config.methods[m], k, config.amplitude_u);
      double mean = mean_of(samples);
      curves[m].k_values.push_back(k);
      curves[m].power.push_back(mean);
      curves[m].stderr_.push_back(stderr_of(samples, mean));
    }
  }
  return curves;
}

MinSignalCurve run_min_signal(const ExperimentConfig& config) {
  config.validate();
  MinSignalCurve curve;
  curve.replicates = config.replicates;
  curve.target_power = config.target_power;

  for (int k : config.k_grid) {
    auto power_at = [&](double u) {
      return mean_of(detail::screening_power_replicates(config, ScreenMethod::LassoPath,
                                                        k, u));
    };
    double lo = config.u_bracket_lo;
    double hi = config.u_bracket_hi;
    bool saturated = false;
    double u_star;
    std::pair<double, double> bracket;
    if (power_at(hi) < config.target_power) {
      // Signal requirement exceeds the bracket cap; report the cap.
      saturated = true;
      u_star = hi;
      bracket = {hi, hi};
    } else if (power_at(lo) >= config.target_power) {
      u_star = lo;
      bracket = {0.0, lo};
    } else {
      for (int it = 0; it < config.bisection_iters; ++it) {
        double mid = 0.5 * (lo + hi);
        if (power_at(mid) >= config.target_power) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      u_star = 0.5 * (lo + hi);
      bracket = {lo, hi};
    }
    curve.k_values.push_back(k);
    curve.u_star.push_back(u_star);
    curve.bracket.push_back(bracket);
    curve.saturated.push_back(saturated);
  }
  return curve;
}

std::vector<LevelRow> run_test_level(const ExperimentConfig& config) {
  config.validate();
  std::vector<char> star_reject(config.replicates, 0);
  std::vector<char> fisher_reject(config.replicates, 0);

  parallel_for(config.replicates, [&](int r) {
    ReplicateData data = draw_replicate(config, r);
    Eigen::VectorXd y = config.sigma * data.noise;  // theta_0 = 0
    star_reject[r] = test_known_variance(y, data.design, config.sigma * config.sigma,
                                         config.alpha, config.budget)
                         .reject;
    fisher_reject[r] =
        test_unknown_variance(y, data.design, config.alpha, config.budget, config.test_k_cap)
            .reject;
  });

  auto summarize = [&](Procedure proc, const std::vector<char>& flags) {
    LevelRow row;
    row.procedure = proc;
    row.n = config.n;
    row.p = config.p;
    row.alpha = config.alpha;
    row.replicates = config.replicates;
    row.rejections = static_cast<int>(std::count(flags.begin(), flags.end(), 1));
    row.rate = static_cast<double>(row.rejections) / config.replicates;
    row.bound = config.alpha +
                3.0 * std::sqrt(config.alpha * (1.0 - config.alpha) / config.replicates);
    row.pass = row.rate <= row.bound;
    return row;
  };
  return {summarize(Procedure::KnownVarianceStar, star_reject),
          summarize(Procedure::UnknownVarianceFisher, fisher_reject)};
}

std::vector<TailBoundReport> run_tail_bounds(const ExperimentConfig& config) {
  std::uint64_t replicates = std::max<std::uint64_t>(config.replicates, 1000);
  std::vector<TailBoundReport> reports;
  std::uint64_t stream = 0;

  const int chi2_dims[] = {1, 5, 20, 100};
  const double chi2_levels[] = {0.1, 0.01};
  for (TailBound bound :
       {TailBound::Chi2Upper, TailBound::Chi2Lower, TailBound::Chi2SmallBall}) {
    for (int d : chi2_dims) {
      for (double x : chi2_levels) {
        reports.push_back(verify_tail_bound(bound, {{"d", static_cast<double>(d)}}, x,
                                            replicates, config.seed + stream++));
      }
    }
  }

  const int wishart_dims[] = {2, 5, 10};
  const double wishart_levels[] = {0.1, 0.05};
  for (TailBound bound : {TailBound::WishartMax, TailBound::WishartMin}) {
    for (int d : wishart_dims) {
      for (double x : wishart_levels) {
        reports.push_back(verify_tail_bound(
            bound, {{"n", 50.0}, {"d", static_cast<double>(d)}}, x, replicates,
            config.seed + stream++));
      }
    }
  }
  for (int d : wishart_dims) {
    // constant of the small-ball bound is unspecified; rows are informational
    reports.push_back(verify_tail_bound(TailBound::WishartSmallBall,
                                        {{"n", 50.0}, {"d", static_cast<double>(d)}, {"c", 1.0}},
                                        0.1, replicates, config.seed + stream++));
  }

  auto exact = hypergeom_exact_grid();
  reports.insert(reports.end(), exact.begin(), exact.end());
  return reports;
}

std::vector<TailBoundReport> hypergeom_exact_grid() {
  std::vector<TailBoundReport> reports;
  for (int k = 1; k <= 12; ++k) {
    for (int p = std::max(2, k); p <= 60; p += (p < 12 ? 1 : 4)) {
      if (k > p) continue;
      for (int i = 1; i <= k; ++i) {
        double x = static_cast<double>(i) / k;
        reports.push_back(verify_tail_bound(TailBound::HypergeomUpper,
                                            {{"k", static_cast<double>(k)},
                                             {"p", static_cast<double>(p)}},
                                            x, 0, 0));
      }
    }
  }
  return reports;
}

std::vector<std::pair<int, SeparationEstimate>> run_separation(const ExperimentConfig& config) {
  config.validate();
  DesignMatrix design = generate_gaussian_design(config.n, config.p, config.seed, 0);
  const double sigma2 = config.sigma * config.sigma;

  std::vector<std::pair<int, SeparationEstimate>> rows;
  for (int k : config.k_grid) {
    std::function<bool(const Eigen::VectorXd&)> closure;
    if (config.separation_procedure == Procedure::KnownVarianceStar) {
      closure = [&](const Eigen::VectorXd& y) {
        return test_known_variance(y, design, sigma2, config.alpha, config.budget).reject;
      };
    } else {
      closure = [&](const Eigen::VectorXd& y) {
        return test_unknown_variance(y, design, config.alpha, config.budget,
                                     config.test_k_cap)
            .reject;
      };
    }
    rows.emplace_back(k, estimate_separation_distance(closure, design, k, config.alpha,
                                                      config.delta, config.replicates,
                                                      config.seed + 17, config.sigma));
  }
  return rows;
}

std::string power_curve_csv(const PowerCurve& curve) {
  std::ostringstream out;
  out << "k,power,stderr,replicates\n";
  for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
    out << curve.k_values[i] << "," << format_double(curve.power[i]) << ","
        << format_double(curve.stderr_[i]) << "," << curve.replicates << "\n";
  }
  if (curve.degenerate_replication) {
    out << "# warning: single replicate, standard errors are degenerate\n";
  }
  return out.str();
}

std::string min_signal_csv(const MinSignalCurve& curve) {
  std::ostringstream out;
  out << "k,u_star,bracket_lo,bracket_hi,saturated,replicates\n";
  for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
    out << curve.k_values[i] << "," << format_double(curve.u_star[i]) << ","
        << format_double(curve.bracket[i].first) << ","
        << format_double(curve.bracket[i].second) << ","
        << (curve.saturated[i] ? 1 : 0) << "," << curve.replicates << "\n";
  }
  return out.str();
}

std::string level_rows_csv(const std::vector<LevelRow>& rows) {
  std::ostringstream out;
  out << "procedure,n,p,alpha,replicates,rejections,rate,bound,verdict\n";
  for (const auto& row : rows) {
    out << procedure_name(row.procedure) << "," << row.n << "," << row.p << ","
        << format_double(row.alpha) << "," << row.replicates << "," << row.rejections
        << "," << format_double(row.rate) << "," << format_double(row.bound) << ","
        << (row.pass ? "PASS" : "FAIL") << "\n";
  }
  return out.str();
}

std::string tail_reports_csv(const std::vector<TailBoundReport>& reports) {
  std::ostringstream out;
  out << tail_bound_csv_header() << "\n";
  for (const auto& report : reports) out << tail_bound_csv_row(report) << "\n";
  return out.str();
}

std::string separation_csv(const std::vector<std::pair<int, SeparationEstimate>>& rows) {
  std::ostringstream out;
  out << "procedure_alpha,k,rho_hat,bracket_lo,bracket_hi,target_power,replicates\n";
  for (const auto& [k, est] : rows) {
    out << format_double(est.alpha) << "," << k << "," << format_double(est.rho_hat)
        << "," << format_double(est.bracket.first) << ","
        << format_double(est.bracket.second) << "," << format_double(est.target_power)
        << "," << est.replicates << "\n";
  }
  return out.str();
}

std::vector<std::string> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  auto path_of = [&](const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };
  std::vector<std::string> written;

  switch (config.experiment) {
    case ExperimentKind::PowerVsK: {
      auto curves = run_power_vs_k(config);
      std::vector<PlotSeries> series;
      for (const auto& curve : curves) {
        std::string file = path_of(std::string("power_") +
                                   screen_method_name(curve.method) + ".csv");
        write_text_file(file, power_curve_csv(curve));
        written.push_back(file);
        PlotSeries s;
        s.label = screen_method_name(curve.method);
        for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
          s.x.push_back(curve.k_values[i]);
          s.y.push_back(curve.power[i]);
          s.yerr.push_back(curve.stderr_[i]);
        }
        series.push_back(std::move(s));
      }
      std::string plot = path_of("power_vs_k.svg");
      emit_plot(series, plot, "Screening power vs sparsity", "k", "power");
      written.push_back(plot);
      break;
    }
    case ExperimentKind::MinSignal: {
      auto curve = run_min_signal(config);
      std::string file = path_of("min_signal.csv");
      write_text_file(file, min_signal_csv(curve));
      written.push_back(file);
      PlotSeries s;
      s.label = "u*";
      for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
        s.x.push_back(curve.k_values[i]);
        s.y.push_back(curve.u_star[i]);
        s.yerr.push_back(0.5 * (curve.bracket[i].second - curve.bracket[i].first));
      }
      std::string plot = path_of("min_signal.svg");
      emit_plot({s}, plot, "Minimal screening signal", "k", "u*");
      written.push_back(plot);
      break;
    }
    case ExperimentKind::TestLevel: {
      std::string file = path_of("test_level.csv");
      write_text_file(file, level_rows_csv(run_test_level(config)));
      written.push_back(file);
      break;
    }
    case ExperimentKind::TestSeparation: {
      std::string file = path_of("separation.csv");
      write_text_file(file, separation_csv(run_separation(config)));
      written.push_back(file);
      break;
    }
    case ExperimentKind::TailBounds: {
      std::string file = path_of("tail_bounds.csv");
      write_text_file(file, tail_reports_csv(run_tail_bounds(config)));
      written.push_back(file);
      break;
    }
  }
  return written;
}

}  // namespace uhdreg
