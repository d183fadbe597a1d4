#include "stpis/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stpis/errors.hpp"
#include "stpis/libsvm_io.hpp"
#include "stpis/lipschitz_est.hpp"
#include "stpis/problems.hpp"
#include "stpis/rng.hpp"
#include "stpis/trace_io.hpp"

namespace stpis {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kProblems{"synthetic", "ridge", "svm"};
const std::set<std::string> kFstarSources{"auto", "given", "none"};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(kProblems.contains(problem), "problem must be synthetic, ridge or svm");
  require(problem == "synthetic" || !data.empty(), "problem '" + problem + "' needs --data");
  require(problem != "synthetic" || (m >= 1 && n >= 1), "synthetic problems need m, n >= 1");
  require(!lambda || (*lambda > 0.0 && std::isfinite(*lambda)), "lambda must be finite and > 0");
  require(!sampling.empty(), "at least one sampling strategy is required");
  for (const auto& s : sampling) parse_sampling_strategy(s);
  std::set<std::string> unique(sampling.begin(), sampling.end());
  require(unique.size() == sampling.size(), "sampling strategies must be distinct");
  require(scaling == "auto" || (parse_scaling_rule(scaling), true), "bad scaling");
  parse_schedule_kind(stepsize);
  require(!alpha0 || *alpha0 > 0.0, "alpha0 must be > 0");
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be finite and > 0");
  require(t > 0.0 && std::isfinite(t), "t must be finite and > 0");
  require(kFstarSources.contains(fstar_source), "fstar_source must be auto, given or none");
  require(fstar_source != "given" || fstar.has_value(), "fstar_source 'given' needs fstar");
  require(iters >= 1, "iters must be >= 1");
  require(seeds >= 1, "seeds must be >= 1");
  require(stride >= 1, "stride must be >= 1");
  require(x0 == "zeros" || x0 == "gaussian", "x0 must be zeros or gaussian");
  require(transform == "none" || transform == "gaussian", "transform must be none or gaussian");
  require(refit_period >= 1, "refit_period must be >= 1");
  require(!out.empty(), "out must be a directory path");
  require(!estimate_l || std::find(sampling.begin(), sampling.end(), "custom") == sampling.end(),
          "custom sampling cannot be combined with estimate_l");
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["data"] = c.data;
  j["m"] = c.m;
  j["n"] = c.n;
  j["data_seed"] = c.data_seed;
  j["dims"] = c.dims ? json(*c.dims) : json(nullptr);
  j["positive_class"] = c.positive_class;
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  j["sampling"] = c.sampling;
  j["custom_p"] = c.custom_p;
  j["scaling"] = c.scaling;
  j["stepsize"] = c.stepsize;
  j["alpha0"] = c.alpha0 ? json(*c.alpha0) : json(nullptr);
  j["epsilon"] = c.epsilon;
  j["t"] = c.t;
  j["fstar_source"] = c.fstar_source;
  j["fstar"] = c.fstar ? json(*c.fstar) : json(nullptr);
  j["iters"] = c.iters;
  j["seeds"] = c.seeds;
  j["seed_base"] = c.seed_base;
  j["stride"] = c.stride;
  j["x0"] = c.x0;
  j["x0_seed"] = c.x0_seed;
  j["transform"] = c.transform;
  j["transform_seed"] = c.transform_seed;
  j["estimate_l"] = c.estimate_l;
  j["refit_period"] = c.refit_period;
  j["out"] = c.out;
  return j.dump(2);
}

namespace {

template <typename T>
void read_optional(const json& v, std::optional<T>& field) {
  if (v.is_null()) {
    field.reset();
  } else {
    field = v.get<T>();
  }
}

ExperimentConfig config_from_object(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "problem") c.problem = v.get<std::string>();
    else if (key == "data") c.data = v.get<std::string>();
    else if (key == "m") c.m = v.get<std::size_t>();
    else if (key == "n") c.n = v.get<std::size_t>();
    else if (key == "data_seed") c.data_seed = v.get<std::uint64_t>();
    else if (key == "dims") read_optional(v, c.dims);
    else if (key == "positive_class") c.positive_class = v.get<double>();
    else if (key == "lambda") read_optional(v, c.lambda);
    else if (key == "sampling") c.sampling = v.get<std::vector<std::string>>();
    else if (key == "custom_p") c.custom_p = v.get<std::vector<double>>();
    else if (key == "scaling") c.scaling = v.get<std::string>();
    else if (key == "stepsize") c.stepsize = v.get<std::string>();
    else if (key == "alpha0") read_optional(v, c.alpha0);
    else if (key == "epsilon") c.epsilon = v.get<double>();
    else if (key == "t") c.t = v.get<double>();
    else if (key == "fstar_source") c.fstar_source = v.get<std::string>();
    else if (key == "fstar") read_optional(v, c.fstar);
    else if (key == "iters") c.iters = v.get<std::uint64_t>();
    else if (key == "seeds") c.seeds = v.get<std::size_t>();
    else if (key == "seed_base") c.seed_base = v.get<std::uint64_t>();
    else if (key == "stride") c.stride = v.get<std::uint64_t>();
    else if (key == "x0") c.x0 = v.get<std::string>();
    else if (key == "x0_seed") c.x0_seed = v.get<std::uint64_t>();
    else if (key == "transform") c.transform = v.get<std::string>();
    else if (key == "transform_seed") c.transform_seed = v.get<std::uint64_t>();
    else if (key == "estimate_l") c.estimate_l = v.get<bool>();
    else if (key == "refit_period") c.refit_period = v.get<std::uint64_t>();
    else if (key == "out") c.out = v.get<std::string>();
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.is_object() && j.contains("config") && j.contains("resolved")) {
      return config_from_object(j.at("config"));
    }
    return config_from_object(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
}

namespace {

/// (1/m) ||(A B)(:, i)||^2 + lambda ||B(:, i)||^2 for ridge (exact), and the
/// matching ||(A B)(:, i)||^2 + lambda ||B(:, i)||^2 bound for the SVM.
CoordinateSmoothness transformed_smoothness(const SparseMatrix& a, double row_scale, double lambda,
                                            const DenseMatrix& b) {
  const DenseVector ab = column_sq_norms(a.multiply_dense(b));
  DenseVector l(b.cols());
  for (std::size_t i = 0; i < b.cols(); ++i) {
    double bcol = 0.0;
    for (std::size_t r = 0; r < b.rows(); ++r) bcol += b(r, i) * b(r, i);
    l[i] = row_scale * ab[i] + lambda * bcol;
  }
  return CoordinateSmoothness(std::move(l));
}

}  // namespace

PreparedProblem prepare_problem(const ExperimentConfig& config) {
  config.validate();
  PreparedProblem out;

  std::shared_ptr<const RidgeProblem> ridge;
  std::shared_ptr<const SquaredSvmProblem> svm;
  if (config.problem == "synthetic") {
    auto prob = generate_synthetic({config.m, config.n, config.data_seed});
    if (config.lambda && *config.lambda != prob.lambda()) {
      prob = RidgeProblem(prob.matrix(), prob.targets(), *config.lambda);
    }
    ridge = std::make_shared<const RidgeProblem>(std::move(prob));
  } else {
    ParseOptions opts;
    opts.dims = config.dims;
    auto parsed = parse_libsvm_file(config.data, opts);
    if (parsed.unsorted_lines > 0) {
      out.warnings.push_back(std::to_string(parsed.unsorted_lines) +
                             " data lines had unsorted feature indices");
    }
    auto& ds = parsed.dataset;
    if (ds.x.rows() == 0 || ds.x.cols() == 0) throw DataError("dataset is empty");
    const double lambda = config.lambda.value_or(1.0 / static_cast<double>(ds.x.rows()));
    if (config.problem == "ridge") {
      ridge = std::make_shared<const RidgeProblem>(ds.x, ds.labels, lambda);
    } else {
      auto bin = binarize_labels(ds, config.positive_class);
      svm = std::make_shared<const SquaredSvmProblem>(std::move(bin.x), std::move(bin.labels), lambda);
    }
  }

  std::unique_ptr<Objective> base;
  if (ridge) {
    base = std::make_unique<RidgeObjective>(ridge);
    out.lambda = ridge->lambda();
  } else {
    base = std::make_unique<SvmObjective>(svm);
    out.lambda = svm->lambda();
  }
  const std::size_t n = base->dim();

  std::optional<RidgeSolution> solution;
  if (config.fstar_source == "given") {
    out.f_star = config.fstar;
  } else if (config.fstar_source == "auto" && ridge) {
    solution = ridge_exact_solve(*ridge);
    out.f_star = solution->f;
  }

  if (config.transform == "gaussian") {
    SeededRng rng(config.transform_seed);
    DenseMatrix b = gaussian_matrix(n, rng);
    auto l = ridge ? transformed_smoothness(ridge->matrix(), 1.0 / static_cast<double>(ridge->rows()),
                                            ridge->lambda(), b)
                   : transformed_smoothness(svm->matrix(), 1.0, svm->lambda(), b);
    out.prototype = make_transformed(std::move(base), std::move(b));
    out.prototype->info().smoothness = std::move(l);
  } else {
    out.prototype = std::move(base);
  }
  out.prototype->info().optimum_value = out.f_star;
  out.smoothness = out.prototype->info().smoothness;
  if (out.smoothness && !out.smoothness->clamped().empty()) {
    out.warnings.push_back(std::to_string(out.smoothness->clamped().size()) +
                           " coordinate constants clamped to 1e-12");
  }

  out.x0 = config.x0 == "gaussian" ? InitialPoint::gaussian(config.x0_seed).resolve(n) : DenseVector(n);
  out.f0 = out.prototype->evaluate(out.x0.span());
  out.prototype->reset_evaluations();
  if (!std::isfinite(out.f0)) throw NumericalError("f(x0) is not finite");
  if (out.f_star) {
    out.r0 = out.f0 - *out.f_star;
  } else {
    out.r0 = out.f0;
    out.r0_is_upper_bound = true;
  }
  if (solution && config.transform == "none" && out.r0 > 0.0) {
    out.level_radius = ridge_level_radius(*ridge, out.x0.span(), *solution);
  }
  out.prototype->info().level_radius = out.level_radius;
  return out;
}

namespace {

ScalingRule auto_scaling(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::Uniform: return ScalingRule::MaxL;
    case SamplingStrategy::SqrtL: return ScalingRule::SqrtL;
    case SamplingStrategy::L:
    case SamplingStrategy::Custom: return ScalingRule::L;
  }
  return ScalingRule::L;
}

double default_alpha0(const ExperimentConfig& config, const PreparedProblem& prob,
                      const CoordinateSampler& sampler, const DenseVector& v, ScheduleKind kind) {
  if (config.alpha0) return *config.alpha0;
  if (!prob.smoothness || config.estimate_l) {
    throw ConfigError("--alpha0 is required when coordinate constants are not known up front");
  }
  const auto& p = sampler.probabilities();
  const double s = weighted_smoothness(*prob.smoothness, p.span(), v.span());
  switch (kind) {
    case ScheduleKind::Decay:
      if (!(prob.r0 > 0.0)) throw ConfigError("x0 is already optimal; pass --alpha0");
      return optimal_alpha0(*prob.smoothness, p.span(), v.span(), prob.r0);
    case ScheduleKind::Gap: {
      if (!prob.level_radius) throw ConfigError("gap rule default alpha0 needs R0; pass --alpha0");
      double mpv = p[0] / v[0];
      for (std::size_t i = 1; i < p.size(); ++i) mpv = std::min(mpv, p[i] / v[i]);
      return mpv / (*prob.level_radius * s);  // half the admissible upper limit
    }
    case ScheduleKind::GapStronglyConvex: return 1.0 / s;
    default: return 0.0;
  }
}

}  // namespace

StrategyPlan plan_strategy(const ExperimentConfig& config, const PreparedProblem& prob,
                           const std::string& strategy) {
  const auto kind = parse_sampling_strategy(strategy);
  const std::size_t n = prob.prototype->dim();
  const auto schedule_kind = parse_schedule_kind(config.stepsize);
  const bool know_l = prob.smoothness.has_value() && !config.estimate_l;

  const ScalingRule rule =
      config.scaling == "auto" ? auto_scaling(kind) : parse_scaling_rule(config.scaling);

  std::optional<CoordinateSampler> sampler;
  DenseVector v(n, 1.0);
  std::optional<EstimationOptions> estimation;
  if (config.estimate_l) {
    sampler = CoordinateSampler::uniform(n);
    estimation = EstimationOptions{config.refit_period, SampleBuffer::kDefaultCapacity, kind, rule, true};
  } else if (kind == SamplingStrategy::Custom) {
    if (config.custom_p.size() != n) {
      throw ConfigError("custom_p has " + std::to_string(config.custom_p.size()) +
                        " entries, problem has " + std::to_string(n) + " coordinates");
    }
    sampler = CoordinateSampler::custom(config.custom_p);
  } else if (know_l) {
    sampler = make_sampler(kind, *prob.smoothness);
  } else if (kind == SamplingStrategy::Uniform) {
    sampler = CoordinateSampler::uniform(n);
  } else {
    throw ConfigError("sampling '" + strategy + "' needs coordinate constants; use --estimate-L");
  }
  if (know_l) {
    v = make_scaling(rule, *prob.smoothness);
  } else if (rule != ScalingRule::Unit && !config.estimate_l && config.scaling != "auto") {
    throw ConfigError("scaling '" + config.scaling + "' needs coordinate constants");
  }

  auto need_fstar = [&] {
    if (!prob.f_star) throw ConfigError("step size '" + config.stepsize + "' needs f*");
    return *prob.f_star;
  };
  std::optional<StepSizeSchedule> schedule;
  switch (schedule_kind) {
    case ScheduleKind::Decay:
      schedule = StepSizeSchedule::decay(v, default_alpha0(config, prob, *sampler, v, schedule_kind));
      break;
    case ScheduleKind::Fixed: schedule = StepSizeSchedule::fixed(v, config.epsilon); break;
    case ScheduleKind::Gap: {
      const double f_star = need_fstar();
      schedule = StepSizeSchedule::gap(v, default_alpha0(config, prob, *sampler, v, schedule_kind), f_star);
      break;
    }
    case ScheduleKind::GapStronglyConvex: {
      const double f_star = need_fstar();
      schedule = StepSizeSchedule::gap_strongly_convex(
          v, default_alpha0(config, prob, *sampler, v, schedule_kind), f_star, prob.lambda,
          sampler->probabilities().span());
      break;
    }
    case ScheduleKind::FiniteDiff: schedule = StepSizeSchedule::finite_difference(v, config.t); break;
  }

  StrategyPlan plan{strategy, *sampler, *schedule, estimation, {}, std::nullopt, std::nullopt, {}};

  if (prob.smoothness && prob.r0 > 0.0) {
    const DenseVector& bound_v = know_l ? v : make_scaling(rule, *prob.smoothness);
    const CoordinateSampler bound_p =
        know_l || kind == SamplingStrategy::Custom ? *sampler : make_sampler(kind, *prob.smoothness);
    BoundInputs in{*prob.smoothness, bound_p.probabilities(), bound_v, config.epsilon, prob.r0,
                   prob.level_radius, prob.lambda > 0.0 ? std::optional(prob.lambda) : std::nullopt};
    plan.bounds = bound_rows(strategy, in);
    if (schedule_kind == ScheduleKind::FiniteDiff) {
      if (in.level_radius) {
        plan.t_bound_convex = t_upper_bound_convex(in);
        if (config.t > plan.t_bound_convex->value) {
          plan.warnings.push_back(strategy + ": t = " + format_double(config.t) +
                                  " exceeds the convex admissible bound " +
                                  format_double(plan.t_bound_convex->value));
        }
      }
      if (in.lambda) {
        plan.t_bound_strongly_convex = t_upper_bound_strongly_convex(in);
        if (config.t > *plan.t_bound_strongly_convex) {
          plan.warnings.push_back(strategy + ": t = " + format_double(config.t) +
                                  " exceeds the strongly convex admissible bound " +
                                  format_double(*plan.t_bound_strongly_convex));
        }
      }
    }
    if (prob.r0_is_upper_bound) {
      plan.warnings.push_back(strategy + ": f* unknown, bounds use r0 = f(x0)");
    }
  }
  return plan;
}

namespace {

int threads_from_env() {
  const char* env = std::getenv("STPIS_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("STPIS_THREADS must be a positive integer");
  return static_cast<int>(v);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json plan_json(const StrategyOutcome& o) {
  const auto& plan = o.plan;
  json j;
  j["name"] = plan.name;
  j["p"] = plan.sampler.probabilities().values();
  j["v"] = plan.schedule.scaling().values();
  j["stepsize"] = std::string(to_string(plan.schedule.kind()));
  j["alpha0"] = plan.schedule.alpha0();
  j["epsilon"] = plan.schedule.epsilon();
  j["t"] = plan.schedule.probe_length();
  j["mu"] = plan.schedule.mu();
  j["estimate_l"] = plan.estimation.has_value();
  json bounds = json::array();
  for (const auto& row : plan.bounds) {
    bounds.push_back({{"regime", to_string(row.regime)}, {"k", optional_json(row.k)}, {"note", row.note}});
  }
  j["bounds"] = bounds;
  if (plan.t_bound_convex) {
    j["t_bound_convex"] = {{"terms", plan.t_bound_convex->terms}, {"min", plan.t_bound_convex->value}};
  } else {
    j["t_bound_convex"] = nullptr;
  }
  j["t_bound_strongly_convex"] = optional_json(plan.t_bound_strongly_convex);
  const auto& agg = o.result.aggregate;
  j["final_mean"] = agg.mean.empty() ? json(nullptr) : json(agg.mean.back());
  j["aggregate_metric"] = agg.is_gap ? "gap" : "f";
  j["empirical_k"] = o.empirical_k ? json(*o.empirical_k) : json(nullptr);
  json refits = json::array();
  for (const auto& run : o.result.runs) refits.push_back(run.refits);
  j["refits"] = refits;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files, int threads) {
  PreparedProblem prob = prepare_problem(config);
  if (threads <= 0) threads = threads_from_env();

  ExperimentResult result;
  std::vector<std::string> warnings = prob.warnings;
  for (const auto& name : config.sampling) {
    StrategyPlan plan = plan_strategy(config, prob, name);
    warnings.insert(warnings.end(), plan.warnings.begin(), plan.warnings.end());

    RunConfig rc;
    rc.max_iters = config.iters;
    rc.seed = config.seed_base;
    rc.trace_stride = config.stride;
    rc.x0 = InitialPoint::from(prob.x0);
    rc.estimation = plan.estimation;
    const Objective& proto = *prob.prototype;
    auto multi = stp_is_multi([&proto] { return proto.clone(); }, plan.sampler, plan.schedule, rc,
                              config.seeds, threads);
    for (const auto& run : multi.runs) {
      if (run.stop == StopReason::NonFinite) {
        throw NumericalError(name + " seed " + std::to_string(run.seed) + ": " + run.diagnostic);
      }
    }
    StrategyOutcome outcome{std::move(plan), std::move(multi), std::nullopt};
    const auto& agg = outcome.result.aggregate;
    if (agg.is_gap) {
      for (std::size_t g = 0; g < agg.k.size(); ++g) {
        if (agg.mean[g] <= config.epsilon) {
          outcome.empirical_k = agg.k[g];
          break;
        }
      }
    }
    result.strategies.push_back(std::move(outcome));
  }

  json resolved;
  resolved["prng"] = std::string(SeededRng::kAlgorithmId);
  json seeds = json::array();
  for (std::size_t s = 0; s < config.seeds; ++s) seeds.push_back(config.seed_base + s);
  resolved["seeds"] = seeds;
  resolved["dim"] = prob.prototype->dim();
  resolved["lambda"] = prob.lambda;
  resolved["f_star"] = optional_json(prob.f_star);
  resolved["f0"] = prob.f0;
  resolved["r0"] = prob.r0;
  resolved["r0_is_upper_bound"] = prob.r0_is_upper_bound;
  resolved["level_radius"] = optional_json(prob.level_radius);
  resolved["L"] = prob.smoothness ? json(prob.smoothness->values().values()) : json(nullptr);
  resolved["x0"] = prob.x0.values();
  json strategies = json::array();
  for (const auto& o : result.strategies) strategies.push_back(plan_json(o));
  resolved["strategies"] = strategies;
  resolved["warnings"] = warnings;

  json manifest;
  manifest["config"] = json::parse(config_to_json(config));
  manifest["resolved"] = resolved;
  result.manifest_json = manifest.dump(2) + "\n";

  if (write_files) {
    const fs::path dir(config.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + config.out + "': " + ec.message());
    for (const auto& o : result.strategies) {
      for (const auto& run : o.result.runs) {
        std::ostringstream csv;
        write_trace_csv(run, csv);
        write_text(dir / ("trace_" + o.plan.name + "_seed" + std::to_string(run.seed) + ".csv"),
                   csv.str());
      }
      std::ostringstream agg;
      write_aggregate_csv(o.result.aggregate, agg);
      write_text(dir / ("aggregate_" + o.plan.name + ".csv"), agg.str());
    }
    write_text(dir / "manifest.json", result.manifest_json);
  }
  return result;
}

namespace {

Aggregate load_aggregate(const std::string& path) {
  fs::path file(path);
  std::error_code ec;
  if (fs::is_directory(file, ec)) {
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(file)) {
      const auto name = entry.path().filename().string();
      if (name.starts_with("aggregate_") && name.ends_with(".csv")) found.push_back(entry.path());
    }
    if (found.size() != 1) {
      throw DataError("'" + path + "' holds " + std::to_string(found.size()) +
                      " aggregate files; name one explicitly");
    }
    file = found.front();
  }
  std::ifstream in(file);
  if (!in) throw DataError("cannot open '" + file.string() + "'");
  return read_aggregate_csv(in);
}

}  // namespace

void compare_report(const std::string& path_a, const std::string& path_b, std::ostream& out) {
  write_comparison_csv(load_aggregate(path_a), load_aggregate(path_b), out);
}

}  // namespace stpis
