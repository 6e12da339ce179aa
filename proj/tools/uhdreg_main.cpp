// Batch driver for the sparse-regression phase-transition experiments:
// screening power curves, minimal-signal search, test level checks,
// separation distances, deviation-bound verification, and the closed-form
// rate table.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uhdreg/csv.hpp"
#include "uhdreg/design.hpp"
#include "uhdreg/errors.hpp"
#include "uhdreg/experiments.hpp"
#include "uhdreg/rates.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitBudgetError = 3;

struct CommonOptions {
  std::string config_path;
  std::int64_t seed = -1;
  std::string out_dir;
  std::int64_t replicates = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value config file");
  cmd->add_option("--seed", opts.seed, "RNG seed override");
  cmd->add_option("--out", opts.out_dir, "output directory override");
  cmd->add_option("--replicates", opts.replicates, "replication count override");
}

uhdreg::ExperimentConfig load_config(const CommonOptions& opts,
                                     const std::string& experiment) {
  uhdreg::KeyValueConfig kv;
  if (!opts.config_path.empty()) kv = uhdreg::KeyValueConfig::parse_file(opts.config_path);
  kv.set("experiment", experiment);
  if (opts.seed >= 0) kv.set("seed", std::to_string(opts.seed));
  if (!opts.out_dir.empty()) kv.set("out", opts.out_dir);
  if (opts.replicates > 0) kv.set("replicates", std::to_string(opts.replicates));
  return uhdreg::ExperimentConfig::from_config(kv);
}

int run_and_report(const uhdreg::ExperimentConfig& config) {
  for (const std::string& file : uhdreg::run_experiment(config)) {
    std::cout << "wrote " << file << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse regression phase-transition toolbox"};
  app.require_subcommand(1);

  CommonOptions power_opts, min_opts, level_opts, sep_opts, tail_opts;
  auto* cmd_power = app.add_subcommand("simulate-power",
                                       "screening power vs sparsity (first setting)");
  add_common(cmd_power, power_opts);
  auto* cmd_min = app.add_subcommand("min-signal",
                                     "minimal amplitude for target screening power");
  add_common(cmd_min, min_opts);
  auto* cmd_level = app.add_subcommand("test-level", "type-I error of the adaptive tests");
  add_common(cmd_level, level_opts);
  auto* cmd_sep = app.add_subcommand("separation",
                                     "Monte-Carlo separation distance of a test");
  add_common(cmd_sep, sep_opts);
  auto* cmd_tail = app.add_subcommand("tail-bounds", "deviation-bound verification grid");
  add_common(cmd_tail, tail_opts);

  int rate_k = 1, rate_n = 50, rate_p = 5000;
  auto* cmd_rates = app.add_subcommand("rates", "rate functionals and regime verdict");
  cmd_rates->add_option("--k", rate_k, "sparsity")->required();
  cmd_rates->add_option("--n", rate_n, "sample count")->required();
  cmd_rates->add_option("--p", rate_p, "covariate count")->required();

  std::string eig_design_path;
  int eig_k = 1;
  std::int64_t eig_budget = static_cast<std::int64_t>(uhdreg::kDefaultSubsetBudget);
  auto* cmd_eig = app.add_subcommand("restricted-eig",
                                     "exhaustive restricted eigenvalues of a design CSV");
  cmd_eig->add_option("--design", eig_design_path, "design CSV fixture")->required();
  cmd_eig->add_option("--k", eig_k, "order")->required();
  cmd_eig->add_option("--budget", eig_budget, "subset enumeration budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_power->parsed()) return run_and_report(load_config(power_opts, "power_vs_k"));
    if (cmd_min->parsed()) return run_and_report(load_config(min_opts, "min_signal"));
    if (cmd_level->parsed()) return run_and_report(load_config(level_opts, "test_level"));
    if (cmd_sep->parsed()) return run_and_report(load_config(sep_opts, "separation"));
    if (cmd_tail->parsed()) {
      auto config = load_config(tail_opts, "tail_bounds");
      if (tail_opts.replicates <= 0) config.replicates = 100000;
      return run_and_report(config);
    }
    if (cmd_rates->parsed()) {
      using uhdreg::RateProblem;
      auto verdict = uhdreg::classify_regime(rate_k, rate_n, rate_p);
      std::cout << "k=" << rate_k << " n=" << rate_n << " p=" << rate_p
                << "  k*log(p/k)/n=" << uhdreg::format_double(verdict.ratio) << "  regime="
                << (verdict.regime == uhdreg::Regime::UltraHigh ? "ultra-high" : "classical")
                << "\n";
      for (RateProblem problem :
           {RateProblem::TestKnownVar, RateProblem::TestUnknownVar,
            RateProblem::PredictionFixed, RateProblem::PredictionRandom,
            RateProblem::InverseFixed}) {
        auto rate = uhdreg::rate_value(problem, rate_k, rate_n, rate_p);
        std::cout << rate.formula_id << " = " << uhdreg::format_double(rate.value) << "\n";
      }
      return 0;
    }
    if (cmd_eig->parsed()) {
      auto design = uhdreg::read_design_csv(eig_design_path);
      auto spec = uhdreg::restricted_eigenvalues(design, eig_k,
                                                 static_cast<std::uint64_t>(eig_budget));
      std::cout << "k=" << spec.k << " phi_minus=" << uhdreg::format_double(spec.phi_minus)
                << " phi_plus=" << uhdreg::format_double(spec.phi_plus)
                << " subsets=" << spec.subsets_examined << "\n";
      return 0;
    }
  } catch (const uhdreg::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const uhdreg::budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudgetError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
