#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "stpis/numerics.hpp"
#include "stpis/objective.hpp"

namespace stpis {

enum class ScheduleKind { Decay, Fixed, Gap, GapStronglyConvex, FiniteDiff };

std::string_view to_string(ScheduleKind k);
/// CLI names: decay, fixed, gap, gap-sc, fd.
ScheduleKind parse_schedule_kind(std::string_view name);

/// How the per-coordinate step scaling v is derived from smoothness.
/// MaxL sets every v_i to max_j L_j (the classic uniform STP pairing).
enum class ScalingRule { Unit, L, SqrtL, MaxL };

std::string_view to_string(ScalingRule r);
ScalingRule parse_scaling_rule(std::string_view name);

DenseVector make_scaling(ScalingRule rule, const CoordinateSmoothness& l);

struct FiniteDiffStep {
  double alpha;
  /// f(x + t e_i); only used to form alpha.
  double probe;
};

/// Step-size rule of one run. Every rule returns a value proportional to
/// 1/v_i for the sampled coordinate i.
class StepSizeSchedule {
 public:
  static constexpr double kScalingFloor = 1e-12;
  /// f(x_k) may undershoot f* by this much before alpha_gap reports an error.
  static constexpr double kGapTolerance = 1e-9;

  /// alpha = alpha0 / (v_i sqrt(k+1))
  static StepSizeSchedule decay(DenseVector v, double alpha0);
  /// alpha = epsilon / (n v_i)
  static StepSizeSchedule fixed(DenseVector v, double epsilon);
  /// alpha = alpha0 (f(x_k) - f*) / v_i
  static StepSizeSchedule gap(DenseVector v, double alpha0, double f_star);
  /// alpha = (alpha0 / v_i) sqrt(2 mu (f(x_k) - f*)), mu = lambda / max_i(v_i / p_i)
  static StepSizeSchedule gap_strongly_convex(DenseVector v, double alpha0, double f_star,
                                              double lambda, std::span<const double> p);
  /// alpha = |f(x + t e_i) - f(x)| / (t v_i)
  static StepSizeSchedule finite_difference(DenseVector v, double t);

  ScheduleKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return v_.size(); }
  const DenseVector& scaling() const noexcept { return v_; }
  double alpha0() const noexcept { return alpha0_; }
  double epsilon() const noexcept { return epsilon_; }
  double probe_length() const noexcept { return t_; }
  double f_star() const noexcept { return f_star_; }
  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }

  /// True when each step costs one extra objective evaluation.
  bool probes() const noexcept { return kind_ == ScheduleKind::FiniteDiff; }

  double alpha_decay(std::uint64_t k, std::size_t i) const;
  double alpha_fixed(std::size_t i) const;
  double alpha_gap(double f_xk, std::size_t i) const;
  FiniteDiffStep alpha_fd(Objective& obj, std::span<const double> x, double f_x,
                          std::size_t i) const;

  /// Dispatches on kind(). `obj` is touched only by the finite-difference rule.
  double alpha(std::uint64_t k, std::size_t i, double f_xk, Objective& obj,
               std::span<const double> x) const;

  /// Same rule and hyperparameters with a new scaling (and probabilities,
  /// which only the strongly convex gap rule consumes).
  StepSizeSchedule rescaled(DenseVector v, std::span<const double> p) const;

 private:
  StepSizeSchedule(ScheduleKind kind, DenseVector v);

  ScheduleKind kind_;
  DenseVector v_;
  double alpha0_ = 0.0;
  double epsilon_ = 0.0;
  double t_ = 0.0;
  double f_star_ = 0.0;
  double lambda_ = 0.0;
  double mu_ = 0.0;
};

/// lambda / max_i(v_i / p_i)
double strong_convexity_mu(double lambda, std::span<const double> p, std::span<const double> v);

/// sum_i p_i L_i / v_i^2
double weighted_smoothness(const CoordinateSmoothness& l, std::span<const double> p,
                           std::span<const double> v);

/// Minimizer of the decay-schedule iteration bound over alpha0:
/// 8^(1/4) sqrt(r0 / sum_i p_i L_i / v_i^2). Throws ConfigError for r0 <= 0.
double optimal_alpha0(const CoordinateSmoothness& l, std::span<const double> p,
                      std::span<const double> v, double r0);

}  // namespace stpis
