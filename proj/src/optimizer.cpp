#include "stpis/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stpis/errors.hpp"
#include "stpis/lipschitz_est.hpp"

namespace stpis {

DenseVector InitialPoint::resolve(std::size_t n) const {
  switch (kind) {
    case Kind::Zeros: return DenseVector(n);
    case Kind::Given:
      if (given.size() != n) throw DimensionError("initial point has the wrong dimension");
      return given;
    case Kind::Gaussian: {
      SeededRng rng(seed);
      DenseVector x(n);
      for (auto& v : x) v = rng.gaussian();
      return x;
    }
  }
  return DenseVector(n);
}

void RunConfig::validate() const {
  if (max_iters == 0) throw ConfigError("max_iters must be >= 1");
  if (trace_stride == 0) throw ConfigError("trace stride must be >= 1");
  if (estimation && estimation->refit_period == 0) throw ConfigError("refit period must be >= 1");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::MaxIterations: return "max_iters";
    case StopReason::EvalBudget: return "eval_budget";
    case StopReason::TargetGap: return "target_gap";
    case StopReason::NonFinite: return "non_finite";
  }
  return "?";
}

namespace {

struct Estimator {
  EstimationOptions options;
  SampleBuffer buffer;
};

}  // namespace

RunTrace stp_is_run(Objective& obj, const CoordinateSampler& initial_sampler,
                    const StepSizeSchedule& initial_schedule, const RunConfig& config) {
  config.validate();
  const std::size_t n = obj.dim();
  if (initial_sampler.size() != n || initial_schedule.size() != n) {
    throw DimensionError("objective, sampler and schedule dimensions differ");
  }

  CoordinateSampler sampler = initial_sampler;
  StepSizeSchedule schedule = initial_schedule;
  std::optional<Estimator> estimator;
  if (config.estimation) {
    estimator.emplace(Estimator{*config.estimation,
                                SampleBuffer(n, config.estimation->buffer_capacity)});
  }

  const auto& optimum = obj.info().optimum_value;
  const bool want_gradient = config.record_gradient && obj.has_gradient();
  const std::uint64_t cost = obj.evaluation_cost();
  const std::uint64_t per_iteration = (2 + (schedule.probes() ? 1 : 0)) * cost;

  RunTrace trace;
  trace.seed = config.seed;
  SeededRng rng(config.seed);
  DenseVector x = config.x0.resolve(n);
  DenseVector x_prev(n);
  const std::uint64_t evals_before = obj.evaluations();
  double f = obj.evaluate(x.span());

  auto record = [&](std::uint64_t k, std::optional<std::size_t> coordinate,
                    std::optional<double> alpha) {
    TraceRecord rec;
    rec.k = k;
    rec.evaluations = obj.evaluations() - evals_before;
    rec.f = f;
    if (optimum) rec.gap = f - *optimum;
    if (want_gradient) rec.grad_l1 = norm1(obj.gradient(x.span()).span());
    rec.coordinate = coordinate;
    rec.alpha = alpha;
    trace.records.push_back(rec);
  };
  auto finish = [&](StopReason reason, std::uint64_t k) {
    trace.stop = reason;
    trace.iterations = k;
    trace.final_x = x;
    trace.final_f = f;
    trace.evaluations = obj.evaluations() - evals_before;
    return trace;
  };

  if (!std::isfinite(f)) {
    trace.diagnostic = "non-finite f(x_0)";
    record(0, std::nullopt, std::nullopt);
    return finish(StopReason::NonFinite, 0);
  }
  record(0, std::nullopt, std::nullopt);
  if (estimator) estimator->buffer.push(x.span(), f);

  std::uint64_t k = 0;
  for (; k < config.max_iters; ++k) {
    if (config.target_gap && optimum && f - *optimum <= *config.target_gap) {
      if (trace.records.back().k != k) record(k, std::nullopt, std::nullopt);
      return finish(StopReason::TargetGap, k);
    }
    if (config.eval_budget &&
        obj.evaluations() - evals_before + per_iteration > *config.eval_budget) {
      if (trace.records.back().k != k) record(k, std::nullopt, std::nullopt);
      return finish(StopReason::EvalBudget, k);
    }

    if (estimator && k > 0 && refresh_policy(k, estimator->options.refit_period) &&
        estimator->buffer.size() >= 2 * n + 1) {
      try {
        const auto estimate = estimated_smoothness(fit_surrogate(estimator->buffer));
        sampler = make_sampler(estimator->options.sampling, estimate);
        if (estimator->options.apply_to_scaling) {
          schedule = schedule.rescaled(make_scaling(estimator->options.scaling, estimate),
                                       sampler.probabilities().span());
        }
        trace.estimated_smoothness = estimate;
        ++trace.refits;
      } catch (const NumericalError&) {
        ++trace.failed_refits;
      }
    }

    const std::size_t i = sampler.draw(rng);
    double alpha;
    if (schedule.probes()) {
      const auto step = schedule.alpha_fd(obj, x.span(), f, i);
      if (estimator) {
        x[i] += schedule.probe_length();
        estimator->buffer.push(x.span(), step.probe);
        x[i] -= schedule.probe_length();
      }
      alpha = step.alpha;
    } else {
      alpha = schedule.alpha(k, i, f, obj, x.span());
    }

    const double xi = x[i];
    x_prev = x;
    x[i] = xi + alpha;
    const double f_plus = obj.evaluate(x.span());
    if (estimator) estimator->buffer.push(x.span(), f_plus);
    x[i] = xi - alpha;
    const double f_minus = obj.evaluate(x.span());
    if (estimator) estimator->buffer.push(x.span(), f_minus);

    if (!std::isfinite(alpha) || !std::isfinite(f_plus) || !std::isfinite(f_minus)) {
      x[i] = xi;
      trace.diagnostic = "non-finite value at iteration " + std::to_string(k) + " (coordinate " +
                         std::to_string(i) + ", alpha " + std::to_string(alpha) + ", f+ " +
                         std::to_string(f_plus) + ", f- " + std::to_string(f_minus) + ")";
      record(k, std::nullopt, std::nullopt);
      return finish(StopReason::NonFinite, k);
    }

    const double f_prev = f;
    if (f_plus < f && f_plus <= f_minus) {
      x[i] = xi + alpha;
      f = f_plus;
    } else if (f_minus < f) {
      f = f_minus;
    } else {
      x[i] = xi;
    }

    if (config.observer) {
      config.observer(IterationEvent{k + 1, i, alpha, f_prev, f_plus, f_minus, f, x_prev.span(),
                                     x.span(), obj.evaluations() - evals_before});
    }
    if ((k + 1) % config.trace_stride == 0 || k + 1 == config.max_iters) record(k + 1, i, alpha);
  }
  return finish(StopReason::MaxIterations, k);
}

Aggregate aggregate_traces(std::span<const RunTrace> runs) {
  Aggregate agg;
  if (runs.empty()) return agg;
  for (const auto& run : runs) {
    for (const auto& rec : run.records) {
      if (!rec.gap) agg.is_gap = false;
      agg.k.push_back(rec.k);
    }
  }
  std::sort(agg.k.begin(), agg.k.end());
  agg.k.erase(std::unique(agg.k.begin(), agg.k.end()), agg.k.end());

  const std::size_t grid = agg.k.size();
  agg.mean.assign(grid, 0.0);
  agg.min.assign(grid, std::numeric_limits<double>::infinity());
  agg.max.assign(grid, -std::numeric_limits<double>::infinity());
  for (const auto& run : runs) {
    std::size_t cursor = 0;
    for (std::size_t g = 0; g < grid; ++g) {
      while (cursor + 1 < run.records.size() && run.records[cursor + 1].k <= agg.k[g]) ++cursor;
      const auto& rec = run.records[cursor];
      const double value = agg.is_gap ? *rec.gap : rec.f;
      agg.mean[g] += value;
      agg.min[g] = std::min(agg.min[g], value);
      agg.max[g] = std::max(agg.max[g], value);
    }
  }
  for (auto& m : agg.mean) m /= static_cast<double>(runs.size());
  return agg;
}

MultiRunResult stp_is_multi(const ObjectiveFactory& factory, const CoordinateSampler& sampler,
                            const StepSizeSchedule& schedule, const RunConfig& config,
                            std::size_t num_seeds, int threads) {
  if (num_seeds == 0) throw ConfigError("number of seeds must be >= 1");
  config.validate();
  MultiRunResult result;
  result.runs.resize(num_seeds);
  std::vector<std::exception_ptr> errors(num_seeds);
  const long long count = static_cast<long long>(num_seeds);

#ifdef _OPENMP
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
  for (long long s = 0; s < count; ++s) {
    const auto idx = static_cast<std::size_t>(s);
    try {
      auto obj = factory();
      RunConfig run_config = config;
      run_config.seed = config.seed + idx;
      result.runs[idx] = stp_is_run(*obj, sampler, schedule, run_config);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  (void)threads;
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.aggregate = aggregate_traces(result.runs);
  return result;
}

}  // namespace stpis
