#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stpis/numerics.hpp"
#include "stpis/objective.hpp"
#include "stpis/sampler.hpp"
#include "stpis/stepsize.hpp"

namespace stpis {

/// Starting point of a run.
struct InitialPoint {
  enum class Kind { Zeros, Given, Gaussian };

  Kind kind = Kind::Zeros;
  DenseVector given;
  std::uint64_t seed = 0;

  static InitialPoint zeros() { return {}; }
  static InitialPoint from(DenseVector x) { return {Kind::Given, std::move(x), 0}; }
  static InitialPoint gaussian(std::uint64_t seed) { return {Kind::Gaussian, {}, seed}; }

  DenseVector resolve(std::size_t n) const;
};

/// Periodic re-estimation of coordinate smoothness from queried points.
/// Until the first successful fit the run uses whatever sampler and
/// schedule it was started with.
struct EstimationOptions {
  std::uint64_t refit_period = 50;
  std::size_t buffer_capacity = 4096;
  SamplingStrategy sampling = SamplingStrategy::L;
  ScalingRule scaling = ScalingRule::L;
  /// When false only the sampling probabilities follow the estimate.
  bool apply_to_scaling = true;
};

struct IterationEvent {
  std::uint64_t k;  // iterate index after the step (x_k is `x_next`)
  std::size_t coordinate;
  double alpha;
  double f_prev;
  double f_plus;
  double f_minus;
  double f_next;
  std::span<const double> x_prev;
  std::span<const double> x_next;
  std::uint64_t evaluations;
};

struct RunConfig {
  std::uint64_t max_iters = 500;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> eval_budget;
  std::optional<double> target_gap;
  std::uint64_t trace_stride = 1;
  InitialPoint x0;
  /// Fill the grad_l1 column when the objective exposes a gradient.
  bool record_gradient = true;
  std::optional<EstimationOptions> estimation;
  /// Called after every iteration; tests use it to audit each step.
  std::function<void(const IterationEvent&)> observer;

  void validate() const;
};

enum class StopReason { MaxIterations, EvalBudget, TargetGap, NonFinite };

std::string_view to_string(StopReason r);

/// One trace row. Row k describes iterate x_k; `coordinate` and `alpha` are
/// those of the iteration that produced it (empty for k = 0).
struct TraceRecord {
  std::uint64_t k = 0;
  std::uint64_t evaluations = 0;
  double f = 0.0;
  std::optional<double> gap;
  std::optional<double> grad_l1;
  std::optional<std::size_t> coordinate;
  std::optional<double> alpha;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct RunTrace {
  std::uint64_t seed = 0;
  std::vector<TraceRecord> records;
  DenseVector final_x;
  double final_f = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t evaluations = 0;
  StopReason stop = StopReason::MaxIterations;
  std::string diagnostic;
  std::uint64_t refits = 0;
  std::uint64_t failed_refits = 0;
  /// Last successful estimate when estimation was enabled.
  std::optional<CoordinateSmoothness> estimated_smoothness;
};

/// Runs the stochastic three points loop with coordinate directions:
/// draw i from `sampler`, take alpha from `schedule` (the finite-difference
/// rule spends one probe), evaluate x +- alpha e_i and keep the best of the
/// three points, preferring x_k and then x_+ on ties. f(x_k) is cached.
/// Non-finite values end the run with StopReason::NonFinite.
RunTrace stp_is_run(Objective& obj, const CoordinateSampler& sampler,
                    const StepSizeSchedule& schedule, const RunConfig& config);

struct Aggregate {
  std::vector<std::uint64_t> k;
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;
  /// True when the aggregated metric is the optimality gap, false when it
  /// falls back to f (no known optimum).
  bool is_gap = true;
};

/// Per-k mean/min/max across runs. A run that stopped early contributes its
/// last recorded value to later k.
Aggregate aggregate_traces(std::span<const RunTrace> runs);

struct MultiRunResult {
  std::vector<RunTrace> runs;
  Aggregate aggregate;
};

using ObjectiveFactory = std::function<std::unique_ptr<Objective>()>;

/// Independent runs with seeds config.seed .. config.seed + num_seeds - 1.
/// Runs may execute on up to `threads` OpenMP workers (0 = runtime
/// default); each owns its objective and generator, so the result does not
/// depend on the worker count.
MultiRunResult stp_is_multi(const ObjectiveFactory& factory, const CoordinateSampler& sampler,
                            const StepSizeSchedule& schedule, const RunConfig& config,
                            std::size_t num_seeds, int threads = 0);

}  // namespace stpis
