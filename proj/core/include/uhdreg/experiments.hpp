#ifndef UHDREG_EXPERIMENTS_HPP
#define UHDREG_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uhdreg/config.hpp"
#include "uhdreg/dist.hpp"
#include "uhdreg/hypo.hpp"
#include "uhdreg/screening.hpp"

namespace uhdreg {

enum class ExperimentKind { PowerVsK, MinSignal, TestLevel, TestSeparation, TailBounds };

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::PowerVsK;
  int n = 50;
  int p = 5000;
  std::vector<int> k_grid{1};
  int replicates = 100;
  double amplitude_u = 4.0;  // PowerVsK signal scale
  double target_power = 0.9;
  double u_bracket_lo = 0.5;
  double u_bracket_hi = 128.0;
  int bisection_iters = 12;
  int p0 = 50;
  std::vector<ScreenMethod> methods{ScreenMethod::SIS, ScreenMethod::LassoPath};
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  double sigma = 1.0;
  double alpha = 0.05;
  double delta = 0.1;
  /// Redraw the Gaussian design each replicate (the default) or fix the
  /// replicate-0 draw across all replicates.
  bool redraw_design = true;
  std::uint64_t budget = kDefaultSubsetBudget;
  std::optional<int> test_k_cap = 2;  // enumeration cap for the Fisher test
  Procedure separation_procedure = Procedure::KnownVarianceStar;

  static ExperimentConfig from_config(const KeyValueConfig& kv);
  void validate() const;  // throws config_error on inconsistencies
};

/// Monte-Carlo power of a screening method as a function of the sparsity.
struct PowerCurve {
  std::vector<int> k_values;
  std::vector<double> power;
  std::vector<double> stderr_;
  int replicates = 0;
  int n = 0;
  int p = 0;
  int p0 = 0;
  double amplitude_u = 0.0;
  ScreenMethod method = ScreenMethod::SIS;
  bool degenerate_replication = false;  // single replicate, stderr is 0
};

/// Minimal signal amplitude per sparsity: the smallest u whose screening
/// power reaches the target.
struct MinSignalCurve {
  std::vector<int> k_values;
  std::vector<double> u_star;
  std::vector<std::pair<double, double>> bracket;
  std::vector<bool> saturated;  // power never reached target below the cap
  int replicates = 0;
  double target_power = 0.9;
};

struct LevelRow {
  Procedure procedure;
  int n = 0;
  int p = 0;
  double alpha = 0.0;
  int replicates = 0;
  int rejections = 0;
  double rate = 0.0;
  double bound = 0.0;  // alpha + 3 binomial standard errors
  bool pass = false;
};

std::vector<PowerCurve> run_power_vs_k(const ExperimentConfig& config);
MinSignalCurve run_min_signal(const ExperimentConfig& config);
std::vector<LevelRow> run_test_level(const ExperimentConfig& config);
std::vector<TailBoundReport> run_tail_bounds(const ExperimentConfig& config);
std::vector<std::pair<int, SeparationEstimate>> run_separation(const ExperimentConfig& config);

/// The (k, p, x) grid of exact binomial-surrogate rows checked by the
/// deviation-bound suite: every k <= 12, p <= 60 with x on the atoms i/k.
std::vector<TailBoundReport> hypergeom_exact_grid();

std::string power_curve_csv(const PowerCurve& curve);
std::string min_signal_csv(const MinSignalCurve& curve);
std::string level_rows_csv(const std::vector<LevelRow>& rows);
std::string tail_reports_csv(const std::vector<TailBoundReport>& reports);
std::string separation_csv(const std::vector<std::pair<int, SeparationEstimate>>& rows);

/// Runs the configured experiment end to end, writing CSV files (and the
/// matching SVG chart where one exists) under config.output_dir.
/// Returns the list of files written.
std::vector<std::string> run_experiment(const ExperimentConfig& config);

namespace detail {

/// Power of the configured screening methods at one (k, u) point.
/// Replicate r derives its stream from (seed, r); the design and noise
/// depend only on the replicate, so distinct u values share them
/// (common random numbers).
std::vector<double> screening_power_replicates(const ExperimentConfig& config,
                                               ScreenMethod method, int k, double u);

}  // namespace detail

}  // namespace uhdreg

#endif
