// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stpis/bounds.hpp"
#include "stpis/errors.hpp"
#include "stpis/experiment.hpp"
#include "stpis/libsvm_io.hpp"
#include "stpis/lipschitz_est.hpp"
#include "stpis/optimizer.hpp"
#include "stpis/problems.hpp"
#include "stpis/sampler.hpp"
#include "stpis/stepsize.hpp"

namespace fs = std::filesystem;
using namespace stpis;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

DenseVector scaling_for(SamplingStrategy s, const CoordinateSmoothness& l) {
  switch (s) {
    case SamplingStrategy::SqrtL: return make_scaling(ScalingRule::SqrtL, l);
    case SamplingStrategy::L: return make_scaling(ScalingRule::L, l);
    default: return make_scaling(ScalingRule::MaxL, l);
  }
}

// ---------------------------------------------------------------- 1 and 2

/// One audited problem: the objective, an independent value oracle and what the schedules need.
struct AuditCase {
  std::string name;
  std::function<std::unique_ptr<Objective>()> make;
  std::function<long double(std::span<const double>)> oracle;
  CoordinateSmoothness l;
  std::optional<double> f_star;
  double lambda;
};

std::vector<AuditCase> audit_cases() {
  std::vector<AuditCase> cases;
  oracle::Gen gen(101);

  {
    const auto dense = gen.sparse_dense(200, 20, 0.5);
    const auto y = gen.normals(200);
    auto prob = std::make_shared<const RidgeProblem>(oracle::to_sparse(dense), DenseVector(y), 0.05);
    const auto sol = ridge_exact_solve(*prob);
    cases.push_back({"ridge", [prob] { return std::make_unique<RidgeObjective>(prob); },
                     [dense, y](std::span<const double> x) -> long double {
                       return oracle::ridge_value(dense, y, 0.05, {x.begin(), x.end()});
                     },
                     exact_smoothness(*prob), sol.f, 0.05});
  }
  {
    const auto dense = gen.sparse_dense(120, 15, 0.4);
    std::vector<double> lab(120);
    for (auto& v : lab) v = gen.coin(0.5) ? 1.0 : -1.0;
    auto prob = std::make_shared<const SquaredSvmProblem>(oracle::to_sparse(dense), DenseVector(lab), 0.1);
    cases.push_back({"svm", [prob] { return std::make_unique<SvmObjective>(prob); },
                     [dense, lab](std::span<const double> x) -> long double {
                       return oracle::svm_value(dense, lab, 0.1, {x.begin(), x.end()});
                     },
                     exact_smoothness(*prob), std::nullopt, 0.1});
  }
  {
    std::vector<double> h(12);
    for (auto& v : h) v = gen.log_uniform(0.01, 100.0);
    cases.push_back({"quadratic", [h] { return std::make_unique<DiagonalQuadratic>(DenseVector(h)); },
                     [h](std::span<const double> x) -> long double {
                       long double s = 0.0L;
                       for (std::size_t i = 0; i < x.size(); ++i) s += 0.5L * h[i] * x[i] * x[i];
                       return s;
                     },
                     CoordinateSmoothness(DenseVector(h)), 0.0, *std::min_element(h.begin(), h.end())});
  }
  return cases;
}

struct AuditTotals {
  std::uint64_t iterations = 0;
  std::uint64_t runs = 0;
  std::uint64_t ascent = 0;
  std::uint64_t oracle_mismatch = 0;
  double worst_oracle = 0.0;
  std::uint64_t accounting_errors = 0;
};

AuditTotals audit_runs() {
  AuditTotals t;
  const std::vector<std::string> schedules{"decay", "fixed", "gap", "gap-sc", "fd"};
  const std::vector<SamplingStrategy> strategies{SamplingStrategy::Uniform, SamplingStrategy::SqrtL,
                                                 SamplingStrategy::L};
  for (const auto& c : audit_cases()) {
    for (const auto& sched_name : schedules) {
      const auto kind = parse_schedule_kind(sched_name);
      const bool needs_fstar = kind == ScheduleKind::Gap || kind == ScheduleKind::GapStronglyConvex;
      if (needs_fstar && !c.f_star) continue;
      for (const auto strategy : strategies) {
        const auto sampler = make_sampler(strategy, c.l);
        const auto v = scaling_for(strategy, c.l);
        auto proto = c.make();
        const DenseVector x0 = InitialPoint::gaussian(3).resolve(proto->dim());
        const double f0 = proto->evaluate(x0.span());
        const double r0 = f0 - c.f_star.value_or(0.0);
        const StepSizeSchedule schedule = [&] {
          switch (kind) {
            case ScheduleKind::Decay: return StepSizeSchedule::decay(v, optimal_alpha0(c.l, sampler.probabilities().span(), v.span(), r0));
            case ScheduleKind::Fixed: return StepSizeSchedule::fixed(v, 1e-2);
            case ScheduleKind::Gap: return StepSizeSchedule::gap(v, 1.0, *c.f_star);
            case ScheduleKind::GapStronglyConvex:
              return StepSizeSchedule::gap_strongly_convex(v, 1.0, *c.f_star, c.lambda, sampler.probabilities().span());
            default: return StepSizeSchedule::finite_difference(v, 1e-4);
          }
        }();
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          auto obj = c.make();
          RunConfig rc;
          rc.max_iters = 1200;
          rc.seed = seed;
          rc.x0 = InitialPoint::from(x0);
          rc.trace_stride = 1;
          rc.observer = [&](const IterationEvent& e) {
            ++t.iterations;
            if (!(e.f_next <= e.f_prev)) ++t.ascent;
            const double ref = static_cast<double>(c.oracle(e.x_next));
            const double diff = std::abs(ref - e.f_next);
            t.worst_oracle = std::max(t.worst_oracle, diff);
            if (!(diff <= 1e-12)) ++t.oracle_mismatch;
          };
          const auto trace = stp_is_run(*obj, sampler, schedule, rc);
          ++t.runs;
          const std::uint64_t expected = 1 + trace.iterations * (2 + (schedule.probes() ? 1 : 0));
          if (trace.stop != StopReason::MaxIterations || trace.iterations != rc.max_iters ||
              trace.evaluations != expected || obj->evaluations() != expected) {
            ++t.accounting_errors;
          }
          for (std::size_t r = 0; r < trace.records.size(); ++r) {
            // recorded rows are non-increasing as well
            const auto& rec = trace.records[r];
            if (r + 1 < trace.records.size() && !(trace.records[r + 1].f <= rec.f)) ++t.ascent;
          }
        }
      }
    }
  }
  return t;
}

const AuditTotals& audit() {
  static const AuditTotals totals = audit_runs();
  return totals;
}

Verdict criterion1() {
  const auto& t = audit();
  const bool pass = t.iterations >= 100000 && t.ascent == 0 && t.oracle_mismatch == 0;
  return {pass, std::to_string(t.iterations) + " iterations over " + std::to_string(t.runs) +
                    " runs, ascents " + std::to_string(t.ascent) + ", oracle mismatches " +
                    std::to_string(t.oracle_mismatch) + " (max |diff| " + fmt(t.worst_oracle) + ")"};
}

Verdict criterion2() {
  const auto& t = audit();
  return {t.accounting_errors == 0,
          std::to_string(t.runs - t.accounting_errors) + "/" + std::to_string(t.runs) +
              " runs with evaluations = 1 + K(2 + [fd])"};
}

// ---------------------------------------------------------------- ridge helpers

struct SyntheticSetup {
  std::shared_ptr<const RidgeProblem> prob;
  RidgeSolution sol;
  CoordinateSmoothness l;
  double r0;
};

SyntheticSetup synthetic(std::size_t m, std::size_t n) {
  auto prob = std::make_shared<const RidgeProblem>(generate_synthetic({m, n, 1}));
  auto sol = ridge_exact_solve(*prob);
  auto l = exact_smoothness(*prob);
  const std::vector<double> zero(n, 0.0);
  const double r0 = prob->value(zero) - sol.f;
  return {prob, std::move(sol), std::move(l), r0};
}

MultiRunResult run_fd(const SyntheticSetup& s, const CoordinateSampler& sampler, const DenseVector& v,
                      std::uint64_t iters, std::size_t seeds) {
  auto proto = std::make_unique<RidgeObjective>(s.prob);
  proto->info().optimum_value = s.sol.f;
  const Objective& p = *proto;
  RunConfig rc;
  rc.max_iters = iters;
  rc.seed = 0;
  rc.record_gradient = false;
  return stp_is_multi([&p] { return p.clone(); }, sampler, StepSizeSchedule::finite_difference(v, 1e-4), rc,
                      seeds);
}

// ---------------------------------------------------------------- 3

Verdict criterion3() {
  const auto s = synthetic(1000, 10);
  const double eps = 1e-3;
  const double lambda = s.prob->lambda();
  const auto k = static_cast<std::uint64_t>(std::ceil(s.l.sum() / lambda * std::log(2.0 * s.r0 / eps)));
  const auto res = run_fd(s, CoordinateSampler::from_smoothness(s.l), s.l.values(), k, 30);
  const double mean = res.aggregate.mean.back();
  return {mean <= 2.0 * eps, "K = " + std::to_string(k) + ", mean final gap " + fmt(mean) +
                                 " over 30 seeds (limit " + fmt(2.0 * eps) + ")"};
}

// ---------------------------------------------------------------- 4

struct Pairing {
  bool pass;
  std::string detail;
};

Pairing compare_pair(std::size_t m, std::size_t n, std::uint64_t iters, const DenseVector& v_uniform,
                     const SyntheticSetup& s) {
  const auto is = run_fd(s, CoordinateSampler::from_smoothness(s.l), s.l.values(), iters, 10).aggregate;
  const auto un = run_fd(s, CoordinateSampler::uniform(n), v_uniform, iters, 10).aggregate;
  std::size_t counted = 0, better = 0;
  for (std::size_t r = 0; r < is.k.size(); ++r) {
    if (static_cast<double>(is.k[r]) <= 0.1 * static_cast<double>(iters)) continue;
    ++counted;
    if (is.mean[r] < un.mean[r]) ++better;
  }
  const double share = counted ? static_cast<double>(better) / static_cast<double>(counted) : 0.0;
  const bool final_ok = is.mean.back() < un.mean.back();
  return {final_ok && share >= 0.9, "(" + std::to_string(m) + "," + std::to_string(n) + ")@" +
                                        std::to_string(iters) + ": final " + fmt(is.mean.back()) + " vs " +
                                        fmt(un.mean.back()) + ", ahead at " + fmt(100.0 * share) + "% of k"};
}

Verdict criterion4() {
  bool pass = true;
  std::string detail;
  std::string reference;
  for (const auto& [m, n, iters] : {std::tuple<std::size_t, std::size_t, std::uint64_t>{1000, 10, 500},
                                    {100, 100, 5000}}) {
    const auto s = synthetic(m, n);
    // uniform STP steps with the single constant v_i = max_j L_j
    const auto r = compare_pair(m, n, iters, make_scaling(ScalingRule::MaxL, s.l), s);
    pass = pass && r.pass;
    detail += (detail.empty() ? "" : "; ") + r.detail;
    // uniform sampling with per-coordinate v_i = L_i; reported only
    const auto c = compare_pair(m, n, iters, s.l.values(), s);
    reference += (reference.empty() ? "" : "; ") + c.detail;
  }
  return {pass, detail + " | uniform with v_i = L_i: " + reference};
}

// ---------------------------------------------------------------- 5

Verdict criterion5() {
  const std::size_t n = 10;
  DenseVector h(n);
  for (std::size_t j = 0; j < n; ++j) h[j] = std::pow(10.0, 2.0 * static_cast<double>(j) / 9.0);
  const CoordinateSmoothness l(h);
  const auto sampler = CoordinateSampler::from_sqrt_smoothness(l);
  const auto v = make_scaling(ScalingRule::SqrtL, l);
  const DenseVector x0(n, 1.0);
  const double r0 = 0.5 * l.sum();
  const double eps = 0.5;
  const double alpha0 = optimal_alpha0(l, sampler.probabilities().span(), v.span(), r0);
  BoundInputs in{l, sampler.probabilities(), v, eps, r0, std::nullopt, std::nullopt};
  const auto k = static_cast<std::uint64_t>(std::ceil(k_nonconvex_decay(in)));

  const DiagonalQuadratic proto(h);
  RunConfig rc;
  rc.max_iters = k;
  rc.seed = 0;
  rc.x0 = InitialPoint::from(x0);
  rc.trace_stride = 1000;
  const auto res = stp_is_multi([&proto] { return proto.clone(); }, sampler, StepSizeSchedule::decay(v, alpha0), rc,
                                20);
  // mean over seeds of ||grad f(x_k)||_1 at each recorded k
  const std::size_t rows = res.runs.front().records.size();
  double best = INFINITY;
  std::uint64_t best_k = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (const auto& run : res.runs) sum += run.records.at(r).grad_l1.value();
    const double mean = sum / static_cast<double>(res.runs.size());
    if (mean < best) {
      best = mean;
      best_k = res.runs.front().records[r].k;
    }
  }
  return {best <= eps, "K = " + std::to_string(k) + ", alpha0* = " + fmt(alpha0) + ", min mean ||grad||_1 " +
                           fmt(best) + " at k = " + std::to_string(best_k) + " (limit " + fmt(eps) + ")"};
}

// ---------------------------------------------------------------- 6

Verdict criterion6() {
  oracle::Gen gen(606);
  std::size_t violations = 0, strict_failures = 0, equal_failures = 0, checked = 0;
  double tightest = INFINITY;
  auto bounds_of = [](const BoundInputs& is_sqrt, const BoundInputs& is_l, const BoundInputs& un) {
    return std::array<std::pair<double, double>, 4>{
        std::pair{k_nonconvex_decay(is_sqrt), k_nonconvex_decay(un)},
        std::pair{k_nonconvex_fixed(is_l), k_nonconvex_fixed(un)},
        std::pair{k_convex(is_l), k_convex(un)},
        std::pair{k_strongly_convex(is_l), k_strongly_convex(un)}};
  };
  auto inputs = [](const CoordinateSmoothness& l, const CoordinateSampler& s, DenseVector v) {
    return BoundInputs{l, s.probabilities(), std::move(v), 1e-3, 1.0, 1.0, 1.0};
  };
  for (int trial = 0; trial < 1100; ++trial) {
    const std::size_t n = 2 + gen.index(63);
    DenseVector raw(n);
    const bool equal = trial >= 1000;  // the last 100 vectors have identical entries
    const double common = gen.log_uniform(1e-3, 1e3);
    for (auto& x : raw) x = equal ? common : gen.log_uniform(1e-3, 1e3);
    const CoordinateSmoothness l(raw);
    const auto is_sqrt = inputs(l, CoordinateSampler::from_sqrt_smoothness(l), make_scaling(ScalingRule::SqrtL, l));
    const auto is_l = inputs(l, CoordinateSampler::from_smoothness(l), make_scaling(ScalingRule::L, l));
    const auto un = uniform_baseline(is_l);
    for (const auto& [a, b] : bounds_of(is_sqrt, is_l, un)) {
      ++checked;
      const double rel = (b - a) / b;
      if (rel < -1e-12) ++violations;
      if (equal && std::abs(rel) > 1e-12) ++equal_failures;
      if (!equal) {
        tightest = std::min(tightest, rel);
        if (rel <= 1e-12) ++strict_failures;
      }
    }
  }
  const bool pass = violations == 0 && strict_failures == 0 && equal_failures == 0;
  return {pass, std::to_string(checked) + " comparisons, IS > uniform: " + std::to_string(violations) +
                    ", unequal L without strict gain: " + std::to_string(strict_failures) +
                    ", equal L off by > 1e-12: " + std::to_string(equal_failures) +
                    ", smallest relative gain " + fmt(tightest)};
}

// ---------------------------------------------------------------- 7

Verdict criterion7() {
  oracle::Gen gen(707);
  const double t = 1e-4;
  std::size_t violations = 0, beyond_rounding = 0;
  double worst = -INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + gen.index(20), n = 1 + gen.index(6);
    auto prob = std::make_shared<const RidgeProblem>(oracle::to_sparse(gen.sparse_dense(m, n, 0.6)),
                                                     DenseVector(gen.normals(m)), gen.uniform(0.01, 1.0));
    RidgeObjective obj(prob);
    const auto l = exact_smoothness(*prob);
    DenseVector v(n);
    for (auto& x : v) x = gen.log_uniform(0.1, 10.0);
    const auto schedule = StepSizeSchedule::finite_difference(v, t);
    const auto x = gen.normals(n);
    const std::size_t i = gen.index(n);
    const double fx = obj.evaluate(x);
    const auto step = schedule.alpha_fd(obj, x, fx, i);
    const double g = std::abs(obj.gradient(x)[i]);
    const double excess = std::abs(step.alpha * v[i] - g) - (t * l[i] / 2.0 + 1e-12);
    worst = std::max(worst, excess);
    if (excess > 0.0) ++violations;
    // f(x + t e_i) - f(x) carries a few ulps of |f|; the quotient magnifies them by 1/t
    const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(fx), std::abs(step.probe)) / t;
    if (excess > rounding) ++beyond_rounding;
  }
  return {violations == 0, std::to_string(violations) + "/1000 (x, i) outside t L_i / 2 + 1e-12; largest excess " +
                               fmt(worst) + "; outside once rounding of the difference is allowed: " +
                               std::to_string(beyond_rounding)};
}

// ---------------------------------------------------------------- 8

Verdict criterion8() {
  oracle::Gen gen(808);
  double worst_quad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + gen.index(20);
    DenseVector h(n);
    for (auto& x : h) x = gen.log_uniform(0.1, 100.0);
    DiagonalQuadratic f(h);
    SampleBuffer buf(n, 3 * n);
    for (std::size_t k = 0; k < 3 * n; ++k) {
      const auto x = gen.normals(n);
      buf.push(x, f.evaluate(x));
    }
    const auto est = estimated_smoothness(fit_surrogate(buf));
    for (std::size_t i = 0; i < n; ++i) worst_quad = std::max(worst_quad, std::abs(est[i] - h[i]) / h[i]);
  }

  double worst_ridge = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + gen.index(9), m = 6 * n;
    oracle::Dense d(m, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < m; ++r) {
      d[r][r % n] = 2.0 + gen.uniform(0.0, 3.0);
      for (std::size_t c = 0; c < n; ++c) {
        if (c != r % n && gen.coin(0.3)) d[r][c] = 0.05 * gen.normal();
      }
    }
    const RidgeProblem prob(oracle::to_sparse(d), DenseVector(gen.normals(m)), 0.1);
    const auto exact = exact_smoothness(prob);
    SampleBuffer buf(n, 3 * n);
    for (std::size_t k = 0; k < 3 * n; ++k) {
      const auto x = gen.normals(n);
      buf.push(x, prob.value(x));
    }
    const auto est = estimated_smoothness(fit_surrogate(buf));
    for (std::size_t i = 0; i < n; ++i) worst_ridge = std::max(worst_ridge, std::abs(est[i] - exact[i]) / exact[i]);
  }
  return {worst_quad <= 1e-6 && worst_ridge <= 0.25,
          "diagonal quadratics: max rel err " + fmt(worst_quad) + " (limit 1e-6); diagonally dominant ridge: " +
              fmt(worst_ridge) + " (limit 0.25)"};
}

// ---------------------------------------------------------------- 9

Verdict criterion9() {
  oracle::Gen gen(909);
  auto write = [](const LabeledDataset& ds) {
    std::ostringstream out;
    write_libsvm(ds, out);
    return out.str();
  };
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_libsvm(in).dataset;
  };
  std::size_t round_trip_failures = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = gen.index(60), n = 1 + gen.index(30);
    std::vector<Triplet> trips;
    for (std::size_t r = 0; r < m; ++r) {
      if (gen.coin(0.15)) continue;  // empty row
      for (std::size_t c = 0; c < n; ++c) {
        if (gen.coin(0.25)) trips.push_back({r, c, gen.normal() * std::pow(10.0, gen.uniform(-200, 200))});
      }
    }
    if (m > 0 && (trips.empty() || trips.back().row != m - 1 || trips.back().col != n - 1)) {
      trips.push_back({m - 1, n - 1, 1.0});  // pins the column count
    }
    DenseVector lab(m);
    for (auto& v : lab) v = gen.coin(0.5) ? 1.0 : gen.normal();
    const LabeledDataset ds{SparseMatrix::from_triplets(m, m > 0 ? n : 0, trips), lab};
    const auto text = write(ds);
    const auto back = parse(text);
    if (!(back == ds) || write(back) != text) ++round_trip_failures;
  }

  std::size_t edge_failures = 0;
  {
    const auto ds = parse("# comment only\n\n1 3:2 1:1 # tail\r\n-1\n\n0.5 2:-4\n");
    const LabeledDataset expected{
        SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {0, 2, 2.0}, {2, 1, -4.0}}), DenseVector{1.0, -1.0, 0.5}};
    if (!(ds == expected)) ++edge_failures;
    if (write(ds) != "1 1:1 3:2\n-1\n0.5 2:-4\n") ++edge_failures;
    if (!(parse(write(ds)) == ds)) ++edge_failures;
  }

  const std::vector<std::tuple<std::string, std::size_t, std::size_t>> malformed{
      {"1 1:1\n1 0:2\n", 2, 3},     {"1 1:1 1:2\n", 1, 7}, {"1 1:x\n", 1, 5},     {"abc 1:1\n", 1, 1},
      {"\n# c\n1 2:1 3\n", 3, 7},    {"1 1:nan\n", 1, 5},   {"1 -4:1\n", 1, 3},    {"1 1:1\n\n2 q:1\n", 3, 3}};
  std::size_t anchor_failures = 0;
  for (const auto& [text, line, col] : malformed) {
    try {
      parse(text);
      ++anchor_failures;
    } catch (const ParseError& e) {
      if (e.line() != line || e.column() != col) ++anchor_failures;
    }
  }
  const bool pass = round_trip_failures == 0 && edge_failures == 0 && anchor_failures == 0;
  return {pass, "round trips failed " + std::to_string(round_trip_failures) + "/100, edge cases failed " +
                    std::to_string(edge_failures) + ", misplaced errors " + std::to_string(anchor_failures) + "/" +
                    std::to_string(malformed.size())};
}

// ---------------------------------------------------------------- 10

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  return files;
}

Verdict criterion10() {
  const fs::path root = fs::temp_directory_path() / "stpis_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream svm(root / "data.svm");
    oracle::Gen gen(1010);
    for (int r = 0; r < 80; ++r) {
      svm << (gen.coin(0.5) ? "+1" : "-1");
      for (int c = 1; c <= 8; ++c) {
        if (gen.coin(0.5)) svm << ' ' << c << ':' << gen.normal();
      }
      svm << '\n';
    }
  }
  const std::vector<std::vector<std::string>> configs{
      {"--m", "300", "--n", "12", "--stepsize", "fd", "--iters", "400"},
      {"--m", "150", "--n", "8", "--stepsize", "decay", "--sampling", "uniform,sqrtL", "--iters", "300",
       "--x0", "gaussian", "--x0-seed", "5"},
      {"--m", "100", "--n", "6", "--transform", "gaussian", "--transform-seed", "3", "--estimate-L",
       "--refit-period", "20", "--iters", "300", "--stepsize", "gap-sc", "--alpha0", "0.5"},
      {"--problem", "svm", "--data", (root / "data.svm").string(), "--iters", "250", "--stepsize", "fixed",
       "--seed-base", "40", "--stride", "9"},
  };
  std::size_t identical = 0;
  std::string detail;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto first = root / ("a" + std::to_string(c));
    const auto second = root / ("b" + std::to_string(c));
    std::vector<std::string> args{"run"};
    args.insert(args.end(), configs[c].begin(), configs[c].end());
    args.insert(args.end(), {"--seeds", "4", "--out", first.string()});
    std::ostringstream out, err;
    const int code_a = run_cli(args, out, err);
    const int code_b =
        run_cli({"run", "--config", (first / "manifest.json").string(), "--out", second.string()}, out, err);
    if (code_a != 0 || code_b != 0) {
      detail += " config " + std::to_string(c) + " exited " + std::to_string(code_a) + "/" +
                std::to_string(code_b) + ": " + err.str();
      continue;
    }
    const auto a = csv_files(first);
    if (!a.empty() && a == csv_files(second)) ++identical;
  }
  fs::remove_all(root);
  return {identical == configs.size(),
          std::to_string(identical) + "/" + std::to_string(configs.size()) +
              " manifest reruns byte-identical" + detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  int failures = 0;
  for (const auto& [id, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s [%.2fs]\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
