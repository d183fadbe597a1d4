#include "stpis/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stpis/errors.hpp"

namespace stpis {

std::string_view to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::Decay: return "decay";
    case ScheduleKind::Fixed: return "fixed";
    case ScheduleKind::Gap: return "gap";
    case ScheduleKind::GapStronglyConvex: return "gap-sc";
    case ScheduleKind::FiniteDiff: return "fd";
  }
  return "?";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "decay") return ScheduleKind::Decay;
  if (name == "fixed") return ScheduleKind::Fixed;
  if (name == "gap") return ScheduleKind::Gap;
  if (name == "gap-sc") return ScheduleKind::GapStronglyConvex;
  if (name == "fd") return ScheduleKind::FiniteDiff;
  throw ConfigError("unknown step size rule '" + std::string(name) +
                    "' (expected decay, fixed, gap, gap-sc or fd)");
}

std::string_view to_string(ScalingRule r) {
  switch (r) {
    case ScalingRule::Unit: return "unit";
    case ScalingRule::L: return "L";
    case ScalingRule::SqrtL: return "sqrtL";
    case ScalingRule::MaxL: return "maxL";
  }
  return "?";
}

ScalingRule parse_scaling_rule(std::string_view name) {
  if (name == "unit") return ScalingRule::Unit;
  if (name == "L") return ScalingRule::L;
  if (name == "sqrtL") return ScalingRule::SqrtL;
  if (name == "maxL") return ScalingRule::MaxL;
  throw ConfigError("unknown scaling rule '" + std::string(name) +
                    "' (expected unit, L, sqrtL or maxL)");
}

DenseVector make_scaling(ScalingRule rule, const CoordinateSmoothness& l) {
  DenseVector v(l.size(), 1.0);
  switch (rule) {
    case ScalingRule::Unit: break;
    case ScalingRule::L: v = l.values(); break;
    case ScalingRule::SqrtL:
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sqrt(l[i]);
      break;
    case ScalingRule::MaxL: v = DenseVector(l.size(), l.max()); break;
  }
  return v;
}

StepSizeSchedule::StepSizeSchedule(ScheduleKind kind, DenseVector v)
    : kind_(kind), v_(std::move(v)) {
  if (v_.empty()) throw ConfigError("step size scaling must be non-empty");
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (!std::isfinite(v_[i]) || v_[i] < kScalingFloor) {
      throw ConfigError("step size scaling v_" + std::to_string(i) + " must be finite and >= 1e-12");
    }
  }
}

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ConfigError(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

StepSizeSchedule StepSizeSchedule::decay(DenseVector v, double alpha0) {
  require_positive(alpha0, "alpha0");
  StepSizeSchedule s(ScheduleKind::Decay, std::move(v));
  s.alpha0_ = alpha0;
  return s;
}

StepSizeSchedule StepSizeSchedule::fixed(DenseVector v, double epsilon) {
  require_positive(epsilon, "epsilon");
  StepSizeSchedule s(ScheduleKind::Fixed, std::move(v));
  s.epsilon_ = epsilon;
  return s;
}

StepSizeSchedule StepSizeSchedule::gap(DenseVector v, double alpha0, double f_star) {
  require_positive(alpha0, "alpha0");
  if (!std::isfinite(f_star)) throw ConfigError("gap step size needs a finite f*");
  StepSizeSchedule s(ScheduleKind::Gap, std::move(v));
  s.alpha0_ = alpha0;
  s.f_star_ = f_star;
  return s;
}

StepSizeSchedule StepSizeSchedule::gap_strongly_convex(DenseVector v, double alpha0,
                                                       double f_star, double lambda,
                                                       std::span<const double> p) {
  require_positive(alpha0, "alpha0");
  require_positive(lambda, "lambda");
  if (!std::isfinite(f_star)) throw ConfigError("gap step size needs a finite f*");
  StepSizeSchedule s(ScheduleKind::GapStronglyConvex, std::move(v));
  s.alpha0_ = alpha0;
  s.f_star_ = f_star;
  s.lambda_ = lambda;
  s.mu_ = strong_convexity_mu(lambda, p, s.v_);
  return s;
}

StepSizeSchedule StepSizeSchedule::finite_difference(DenseVector v, double t) {
  require_positive(t, "t");
  StepSizeSchedule s(ScheduleKind::FiniteDiff, std::move(v));
  s.t_ = t;
  return s;
}

double StepSizeSchedule::alpha_decay(std::uint64_t k, std::size_t i) const {
  return alpha0_ / (v_[i] * std::sqrt(static_cast<double>(k) + 1.0));
}

double StepSizeSchedule::alpha_fixed(std::size_t i) const {
  return epsilon_ / (static_cast<double>(v_.size()) * v_[i]);
}

double StepSizeSchedule::alpha_gap(double f_xk, std::size_t i) const {
  double gap = f_xk - f_star_;
  if (gap < -kGapTolerance) {
    throw NumericalError("f(x_k) is below f* by more than the tolerance (gap " +
                         std::to_string(gap) + ")");
  }
  gap = std::max(gap, 0.0);
  if (kind_ == ScheduleKind::GapStronglyConvex) {
    return alpha0_ / v_[i] * std::sqrt(2.0 * mu_ * gap);
  }
  return alpha0_ * gap / v_[i];
}

FiniteDiffStep StepSizeSchedule::alpha_fd(Objective& obj, std::span<const double> x, double f_x,
                                          std::size_t i) const {
  const double probe = obj.coordinate_probe(x, i, t_);
  return {std::abs(probe - f_x) / (t_ * v_[i]), probe};
}

double StepSizeSchedule::alpha(std::uint64_t k, std::size_t i, double f_xk, Objective& obj,
                               std::span<const double> x) const {
  switch (kind_) {
    case ScheduleKind::Decay: return alpha_decay(k, i);
    case ScheduleKind::Fixed: return alpha_fixed(i);
    case ScheduleKind::Gap:
    case ScheduleKind::GapStronglyConvex: return alpha_gap(f_xk, i);
    case ScheduleKind::FiniteDiff: return alpha_fd(obj, x, f_xk, i).alpha;
  }
  return 0.0;
}

StepSizeSchedule StepSizeSchedule::rescaled(DenseVector v, std::span<const double> p) const {
  if (v.size() != v_.size()) throw DimensionError("rescaled: scaling length changed");
  StepSizeSchedule s(kind_, std::move(v));
  s.alpha0_ = alpha0_;
  s.epsilon_ = epsilon_;
  s.t_ = t_;
  s.f_star_ = f_star_;
  s.lambda_ = lambda_;
  if (kind_ == ScheduleKind::GapStronglyConvex) s.mu_ = strong_convexity_mu(lambda_, p, s.v_);
  return s;
}

double strong_convexity_mu(double lambda, std::span<const double> p, std::span<const double> v) {
  if (p.size() != v.size()) throw DimensionError("strong_convexity_mu: p and v lengths differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, v[i] / p[i]);
  return lambda / worst;
}

double weighted_smoothness(const CoordinateSmoothness& l, std::span<const double> p,
                           std::span<const double> v) {
  if (p.size() != l.size() || v.size() != l.size()) {
    throw DimensionError("weighted_smoothness: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) s += p[i] * l[i] / (v[i] * v[i]);
  return s;
}

double optimal_alpha0(const CoordinateSmoothness& l, std::span<const double> p,
                      std::span<const double> v, double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ConfigError("optimal_alpha0: r0 must be > 0");
  return std::pow(8.0, 0.25) * std::sqrt(r0 / weighted_smoothness(l, p, v));
}

}  // namespace stpis
