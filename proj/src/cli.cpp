#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "stpis/errors.hpp"
#include "stpis/experiment.hpp"
#include "stpis/libsvm_io.hpp"

namespace stpis {

namespace {

using Applier = std::function<void(ExperimentConfig&)>;

/// Registers `name` on `app`; when given on the command line the parsed
/// value overwrites `field` after the config file has been loaded.
template <typename V, typename F>
void bind_flag(CLI::App* app, std::vector<Applier>& appliers, const std::string& name,
          F ExperimentConfig::*field, const std::string& help) {
  auto holder = std::make_shared<V>();
  CLI::Option* opt = app->add_option(name, *holder, help);
  if constexpr (std::is_same_v<V, std::vector<std::string>> || std::is_same_v<V, std::vector<double>>) {
    opt->delimiter(',');
  }
  appliers.push_back([opt, holder, field](ExperimentConfig& c) {
    if (opt->count() > 0) c.*field = *holder;
  });
}

struct ExperimentOptions {
  std::vector<Applier> appliers;
  std::string config_path;
  bool estimate_l = false;
  CLI::Option* estimate_opt = nullptr;
  std::shared_ptr<double> fstar = std::make_shared<double>(0.0);
  CLI::Option* fstar_opt = nullptr;
  int threads = 0;

  ExperimentConfig resolve() const {
    ExperimentConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config '" + config_path + "'");
      std::stringstream text;
      text << in.rdbuf();
      c = config_from_json(text.str());
    }
    for (const auto& apply : appliers) apply(c);
    if (estimate_opt->count() > 0) c.estimate_l = true;
    if (fstar_opt->count() > 0) {
      c.fstar = *fstar;
      c.fstar_source = "given";
    }
    c.validate();
    return c;
  }
};

void add_experiment_options(CLI::App* app, ExperimentOptions& o) {
  auto& a = o.appliers;
  app->add_option("--config", o.config_path, "JSON config or manifest.json; flags override it");
  bind_flag<std::string>(app, a, "--problem", &ExperimentConfig::problem, "synthetic | ridge | svm");
  bind_flag<std::string>(app, a, "--data", &ExperimentConfig::data, "LIBSVM file for ridge / svm");
  bind_flag<std::size_t>(app, a, "--m", &ExperimentConfig::m, "synthetic rows");
  bind_flag<std::size_t>(app, a, "--n", &ExperimentConfig::n, "synthetic columns");
  bind_flag<std::uint64_t>(app, a, "--data-seed", &ExperimentConfig::data_seed, "synthetic data seed");
  bind_flag<std::size_t>(app, a, "--dims", &ExperimentConfig::dims, "column count override for LIBSVM data");
  bind_flag<double>(app, a, "--positive-class", &ExperimentConfig::positive_class, "svm label mapped to +1");
  bind_flag<double>(app, a, "--lambda", &ExperimentConfig::lambda, "regularization (default 1/m)");
  bind_flag<std::vector<std::string>>(app, a, "--sampling", &ExperimentConfig::sampling,
                                 "comma list of uniform, sqrtL, L, custom");
  bind_flag<std::vector<double>>(app, a, "--p", &ExperimentConfig::custom_p, "custom probabilities");
  bind_flag<std::string>(app, a, "--scaling", &ExperimentConfig::scaling, "auto | unit | L | sqrtL | maxL");
  bind_flag<std::string>(app, a, "--stepsize", &ExperimentConfig::stepsize, "decay | fixed | gap | gap-sc | fd");
  bind_flag<double>(app, a, "--alpha0", &ExperimentConfig::alpha0, "base step (decay, gap, gap-sc)");
  bind_flag<double>(app, a, "--epsilon", &ExperimentConfig::epsilon, "target accuracy");
  bind_flag<double>(app, a, "--t", &ExperimentConfig::t, "finite-difference probe length");
  bind_flag<std::string>(app, a, "--fstar-source", &ExperimentConfig::fstar_source, "auto | given | none");
  o.fstar_opt = app->add_option("--fstar", *o.fstar, "known optimal value (implies given)");
  bind_flag<std::uint64_t>(app, a, "--iters", &ExperimentConfig::iters, "iterations per run");
  bind_flag<std::size_t>(app, a, "--seeds", &ExperimentConfig::seeds, "number of seeds");
  bind_flag<std::uint64_t>(app, a, "--seed-base", &ExperimentConfig::seed_base, "first seed");
  bind_flag<std::uint64_t>(app, a, "--stride", &ExperimentConfig::stride, "trace every s-th iteration");
  bind_flag<std::string>(app, a, "--x0", &ExperimentConfig::x0, "zeros | gaussian");
  bind_flag<std::uint64_t>(app, a, "--x0-seed", &ExperimentConfig::x0_seed, "seed of a gaussian x0");
  bind_flag<std::string>(app, a, "--transform", &ExperimentConfig::transform, "none | gaussian");
  bind_flag<std::uint64_t>(app, a, "--transform-seed", &ExperimentConfig::transform_seed,
                      "seed of the gaussian change of variables");
  o.estimate_opt = app->add_flag("--estimate-L", o.estimate_l, "estimate coordinate constants online");
  bind_flag<std::uint64_t>(app, a, "--refit-period", &ExperimentConfig::refit_period, "refit every N iterations");
  bind_flag<std::string>(app, a, "--out", &ExperimentConfig::out, "output directory");
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::setprecision(6) << *v;
  return s.str();
}

void print_bounds(const StrategyPlan& plan, std::ostream& out) {
  for (const auto& row : plan.bounds) {
    out << "  " << std::left << std::setw(18) << to_string(row.regime) << std::setw(14) << cell(row.k)
        << row.note << '\n';
  }
  if (plan.t_bound_convex) out << "  t bound (convex)           " << cell(plan.t_bound_convex->value) << '\n';
  if (plan.t_bound_strongly_convex) {
    out << "  t bound (strongly convex)  " << cell(plan.t_bound_strongly_convex) << '\n';
  }
}

int cmd_run(const ExperimentOptions& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = o.resolve();
  const auto result = run_experiment(config, true, o.threads);
  for (const auto& s : result.strategies) {
    const auto& agg = s.result.aggregate;
    out << s.plan.name << ": final mean " << (agg.is_gap ? "gap " : "f ") << cell(agg.mean.back())
        << ", first k with mean gap <= eps: "
        << (s.empirical_k ? std::to_string(*s.empirical_k) : std::string("not reached")) << '\n';
    print_bounds(s.plan, out);
    for (const auto& w : s.plan.warnings) err << "warning: " << w << '\n';
  }
  out << "wrote " << config.out << '\n';
  return 0;
}

int cmd_bounds(const ExperimentOptions& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = o.resolve();
  const PreparedProblem prob = prepare_problem(config);
  out << "r0 = " << cell(prob.r0) << (prob.r0_is_upper_bound ? " (upper bound, f* unknown)" : "")
      << ", R0 = " << cell(prob.level_radius) << ", lambda = " << cell(prob.lambda)
      << ", eps = " << cell(config.epsilon) << '\n';
  for (const auto& name : config.sampling) {
    const auto plan = plan_strategy(config, prob, name);
    out << name << '\n';
    print_bounds(plan, out);
    for (const auto& w : plan.warnings) err << "warning: " << w << '\n';
  }
  return 0;
}

int cmd_parse(const std::string& data, const std::optional<std::size_t>& dims,
              const std::optional<double>& positive, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  ParseOptions opts;
  opts.dims = dims;
  auto parsed = parse_libsvm_file(data, opts);
  if (positive) parsed.dataset = binarize_labels(parsed.dataset, *positive);
  if (out_path.empty()) {
    write_libsvm(parsed.dataset, out);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot write '" + out_path + "'");
    write_libsvm(parsed.dataset, f);
  }
  err << parsed.dataset.x.rows() << " rows, " << parsed.dataset.x.cols() << " columns, "
      << parsed.dataset.x.nnz() << " nonzeros, " << parsed.unsorted_lines << " unsorted lines\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic three points with importance sampling: experiments and bounds", "stpis"};
  app.require_subcommand(1);

  ExperimentOptions run_opts;
  auto* run = app.add_subcommand("run", "run a seed-replicated experiment and write CSV traces");
  add_experiment_options(run, run_opts);
  run->add_option("--threads", run_opts.threads, "parallel seeds (default STPIS_THREADS)");

  ExperimentOptions bound_opts;
  auto* bounds = app.add_subcommand("bounds", "print iteration-complexity bounds");
  add_experiment_options(bounds, bound_opts);

  std::string parse_data, parse_out;
  std::size_t parse_dims = 0;
  double parse_positive = 1.0;
  auto* parse = app.add_subcommand("parse", "validate and canonicalize a LIBSVM file");
  parse->add_option("--data", parse_data, "input file")->required();
  auto* parse_dims_opt = parse->add_option("--dims", parse_dims, "column count override");
  auto* parse_pos_opt = parse->add_option("--binarize", parse_positive, "map this label to +1, others to -1");
  parse->add_option("--out", parse_out, "output file (default stdout)");

  std::string cmp_a, cmp_b, cmp_out;
  auto* compare = app.add_subcommand("compare", "join two aggregates: k,gap_a,gap_b,ratio");
  compare->add_option("a", cmp_a, "aggregate CSV or run directory")->required();
  compare->add_option("b", cmp_b, "aggregate CSV or run directory")->required();
  compare->add_option("--out", cmp_out, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run) return cmd_run(run_opts, out, err);
    if (*bounds) return cmd_bounds(bound_opts, out, err);
    if (*parse) {
      return cmd_parse(parse_data,
                       parse_dims_opt->count() ? std::optional<std::size_t>(parse_dims) : std::nullopt,
                       parse_pos_opt->count() ? std::optional<double>(parse_positive) : std::nullopt,
                       parse_out, out, err);
    }
    if (*compare) {
      if (cmp_out.empty()) {
        compare_report(cmp_a, cmp_b, out);
      } else {
        std::ofstream f(cmp_out, std::ios::binary);
        if (!f) throw Error("cannot write '" + cmp_out + "'");
        compare_report(cmp_a, cmp_b, f);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace stpis
