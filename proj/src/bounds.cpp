#include "stpis/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stpis/errors.hpp"
#include "stpis/libsvm_io.hpp"
#include "stpis/stepsize.hpp"

namespace stpis {

namespace {

double weighted_cubic(const BoundInputs& in) {
  double acc = 0.0;
  for (std::size_t i = 0; i < in.n(); ++i) {
    acc += in.p[i] * in.l[i] * in.l[i] * in.l[i] / (in.v[i] * in.v[i]);
  }
  return acc;
}

double max_sqrt_p(const BoundInputs& in) {
  return std::sqrt(*std::max_element(in.p.begin(), in.p.end()));
}

double need(const std::optional<double>& value, const char* name) {
  if (!value) throw ConfigError(std::string("bound needs ") + name);
  return *value;
}

}  // namespace

void BoundInputs::validate() const {
  if (n() == 0) throw ConfigError("bounds: empty smoothness vector");
  if (p.size() != n() || v.size() != n()) throw DimensionError("bounds: L, p, v lengths differ");
  if (!(epsilon > 0.0)) throw ConfigError("bounds: epsilon must be > 0");
  if (!(r0 > 0.0)) throw ConfigError("bounds: r0 must be > 0");
  for (std::size_t i = 0; i < n(); ++i) {
    if (!(p[i] > 0.0) || !(v[i] > 0.0)) throw ConfigError("bounds: p and v must be positive");
  }
  if (lambda && !(*lambda > 0.0)) throw ConfigError("bounds: lambda must be > 0");
  if (level_radius && !(*level_radius > 0.0)) throw ConfigError("bounds: R0 must be > 0");
}

BoundInputs uniform_baseline(const BoundInputs& in) {
  BoundInputs out = in;
  out.p = DenseVector(in.n(), 1.0 / static_cast<double>(in.n()));
  out.v = DenseVector(in.n(), in.l.max());
  return out;
}

double min_p_over_v(const BoundInputs& in) {
  double m = in.p[0] / in.v[0];
  for (std::size_t i = 1; i < in.n(); ++i) m = std::min(m, in.p[i] / in.v[i]);
  return m;
}

double max_v_over_p(const BoundInputs& in) {
  double m = in.v[0] / in.p[0];
  for (std::size_t i = 1; i < in.n(); ++i) m = std::max(m, in.v[i] / in.p[i]);
  return m;
}

double k_nonconvex_decay_at(const BoundInputs& in, double alpha0) {
  in.validate();
  if (!(alpha0 > 0.0)) throw ConfigError("bounds: alpha0 must be > 0");
  const double s = weighted_smoothness(in.l, in.p.span(), in.v.span());
  const double inner = std::numbers::sqrt2 * in.r0 / alpha0 + alpha0 * s / 2.0;
  const double mpv = min_p_over_v(in);
  return 2.0 * inner * inner / (mpv * mpv * in.epsilon * in.epsilon);
}

double k_nonconvex_decay(const BoundInputs& in) {
  in.validate();
  const double s = weighted_smoothness(in.l, in.p.span(), in.v.span());
  const double mpv = min_p_over_v(in);
  return 4.0 * std::numbers::sqrt2 * in.r0 * s / (mpv * mpv * in.epsilon * in.epsilon);
}

FixedFeasibility fixed_feasibility(const BoundInputs& in) {
  in.validate();
  return {weighted_smoothness(in.l, in.p.span(), in.v.span()),
          2.0 * static_cast<double>(in.n()) * min_p_over_v(in)};
}

double k_nonconvex_fixed(const BoundInputs& in) {
  const auto feas = fixed_feasibility(in);
  if (!feas.feasible()) {
    throw ConfigError("fixed-step bound infeasible: sum p_i L_i / v_i^2 = " +
                      format_double(feas.lhs) + " is not below 2 n min p_i/v_i = " +
                      format_double(feas.rhs));
  }
  const double n = static_cast<double>(in.n());
  const double mpv = min_p_over_v(in);
  return 2.0 * n * in.r0 / (mpv * (1.0 - feas.lhs / feas.rhs) * in.epsilon * in.epsilon);
}

double k_convex(const BoundInputs& in) {
  in.validate();
  const double r = need(in.level_radius, "the level-set radius R0");
  if (in.epsilon >= in.r0) return 0.0;
  const double n = static_cast<double>(in.n());
  return 8.0 * r * r * n / min_p_over_v(in) * (1.0 / in.epsilon - 1.0 / in.r0);
}

double k_strongly_convex(const BoundInputs& in) {
  in.validate();
  const double lambda = need(in.lambda, "lambda");
  if (in.epsilon >= 2.0 * in.r0) return 0.0;
  return max_v_over_p(in) / lambda * std::log(2.0 * in.r0 / in.epsilon);
}

TBound t_upper_bound_convex(const BoundInputs& in) {
  in.validate();
  const double r = need(in.level_radius, "the level-set radius R0");
  const double n = static_cast<double>(in.n());
  const double eps = in.epsilon;
  const double mpv = min_p_over_v(in);
  const double s3 = weighted_cubic(in);
  const double probe = max_sqrt_p(in) * std::sqrt(2.0 * n * in.l.max() * in.r0);
  TBound out{};
  out.terms[0] = eps * eps * mpv / (8.0 * r * r * n * probe);
  out.terms[1] = (eps / r) * std::sqrt(mpv / (n * s3));
  out.terms[2] = eps / (2.0 * probe);
  out.terms[3] = 2.0 * std::sqrt(eps / s3);
  out.value = *std::min_element(out.terms.begin(), out.terms.end());
  return out;
}

double t_upper_bound_strongly_convex(const BoundInputs& in) {
  in.validate();
  const double lambda = need(in.lambda, "lambda");
  const double mu = strong_convexity_mu(lambda, in.p.span(), in.v.span());
  const double n = static_cast<double>(in.n());
  const double b = max_sqrt_p(in) * std::sqrt(2.0 * n * in.l.max() * in.r0);
  const double s3 = weighted_cubic(in);
  // Positive root of (s3/8) t^2 + b t - mu eps / 2, cancellation-free form.
  return mu * in.epsilon / (b + std::sqrt(b * b + s3 * mu * in.epsilon / 4.0));
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::NonconvexDecay: return "nonconvex-decay";
    case Regime::NonconvexFixed: return "nonconvex-fixed";
    case Regime::Convex: return "convex";
    case Regime::StronglyConvex: return "strongly-convex";
  }
  return "?";
}

std::vector<BoundRow> bound_rows(const std::string& strategy, const BoundInputs& in) {
  in.validate();
  std::vector<BoundRow> rows;
  rows.push_back({strategy, Regime::NonconvexDecay, k_nonconvex_decay(in), "at optimal alpha0"});

  const auto feas = fixed_feasibility(in);
  if (feas.feasible()) {
    rows.push_back({strategy, Regime::NonconvexFixed, k_nonconvex_fixed(in), "feasible"});
  } else {
    rows.push_back({strategy, Regime::NonconvexFixed, std::nullopt,
                    "infeasible: " + format_double(feas.lhs) + " >= " + format_double(feas.rhs)});
  }

  if (in.level_radius) {
    const double k = k_convex(in);
    rows.push_back({strategy, Regime::Convex, k, k == 0.0 ? "eps >= r0" : ""});
  } else {
    rows.push_back({strategy, Regime::Convex, std::nullopt, "needs R0"});
  }

  if (in.lambda) {
    const double k = k_strongly_convex(in);
    rows.push_back({strategy, Regime::StronglyConvex, k,
                    k == 0.0 ? "eps >= 2 r0" : "log(2 r0/eps); a log(r0/eps) variant gives a smaller K"});
  } else {
    rows.push_back({strategy, Regime::StronglyConvex, std::nullopt, "needs lambda"});
  }
  return rows;
}

}  // namespace stpis
