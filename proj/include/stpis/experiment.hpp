#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stpis/bounds.hpp"
#include "stpis/objective.hpp"
#include "stpis/optimizer.hpp"
#include "stpis/sampler.hpp"
#include "stpis/stepsize.hpp"

namespace stpis {

/// Flat experiment description. Every field maps to one JSON key of the
/// same name and to one CLI flag; unknown JSON keys are rejected.
struct ExperimentConfig {
  std::string problem = "synthetic";  // synthetic | ridge | svm
  std::string data;                   // LIBSVM path for ridge / svm
  std::size_t m = 1000;
  std::size_t n = 10;
  std::uint64_t data_seed = 1;
  std::optional<std::size_t> dims;
  double positive_class = 1.0;
  std::optional<double> lambda;  // default 1/m

  std::vector<std::string> sampling{"uniform", "L"};
  std::vector<double> custom_p;
  std::string scaling = "auto";  // auto | unit | L | sqrtL | maxL

  std::string stepsize = "fd";
  std::optional<double> alpha0;
  double epsilon = 1e-3;
  double t = 1e-4;
  std::string fstar_source = "auto";  // auto | given | none
  std::optional<double> fstar;

  std::uint64_t iters = 500;
  std::size_t seeds = 10;
  std::uint64_t seed_base = 0;
  std::uint64_t stride = 1;
  std::string x0 = "zeros";  // zeros | gaussian
  std::uint64_t x0_seed = 0;

  std::string transform = "none";  // none | gaussian
  std::uint64_t transform_seed = 0;

  bool estimate_l = false;
  std::uint64_t refit_period = 50;

  std::string out = "stpis_out";

  /// Throws ConfigError for out-of-range or inconsistent values.
  void validate() const;
};

/// Accepts either a bare config object or a manifest (uses its "config").
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config);

/// Problem instance with everything derived from it before any run.
struct PreparedProblem {
  std::unique_ptr<Objective> prototype;
  std::optional<CoordinateSmoothness> smoothness;
  std::optional<double> f_star;
  /// Level-set radius (untransformed ridge only).
  std::optional<double> level_radius;
  double lambda = 0.0;
  DenseVector x0;
  double f0 = 0.0;
  /// f(x0) - f*, or f(x0) as an upper bound when f* is unknown (f >= 0).
  double r0 = 0.0;
  bool r0_is_upper_bound = false;
  std::vector<std::string> warnings;
};

PreparedProblem prepare_problem(const ExperimentConfig& config);

/// Sampler, step rule and bounds for one sampling strategy.
struct StrategyPlan {
  std::string name;
  CoordinateSampler sampler;
  StepSizeSchedule schedule;
  std::optional<EstimationOptions> estimation;
  std::vector<BoundRow> bounds;
  std::optional<TBound> t_bound_convex;
  std::optional<double> t_bound_strongly_convex;
  std::vector<std::string> warnings;
};

StrategyPlan plan_strategy(const ExperimentConfig& config, const PreparedProblem& prob,
                           const std::string& strategy);

struct StrategyOutcome {
  StrategyPlan plan;
  MultiRunResult result;
  /// First aggregated k whose mean gap is <= epsilon.
  std::optional<std::uint64_t> empirical_k;
};

struct ExperimentResult {
  std::vector<StrategyOutcome> strategies;
  std::string manifest_json;
};

/// Runs every strategy over seeds seed_base .. seed_base + seeds - 1. When
/// `write_files` is set, writes trace_<strategy>_seed<s>.csv,
/// aggregate_<strategy>.csv and manifest.json under config.out. `threads`
/// caps parallel seeds (0 = STPIS_THREADS or the OpenMP default).
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files = true,
                                int threads = 0);

/// Joins the mean columns of two aggregates. Each path is an aggregate CSV
/// or a directory holding exactly one aggregate_*.csv.
void compare_report(const std::string& path_a, const std::string& path_b, std::ostream& out);

/// Full command line (argv[0] excluded). Returns the process exit code:
/// 0 ok, 1 usage, 2 config, 3 data, 4 numerical.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stpis
