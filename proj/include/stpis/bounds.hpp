#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stpis/numerics.hpp"
#include "stpis/objective.hpp"

namespace stpis {

/// Inputs shared by the iteration-complexity formulas. n = L.size().
struct BoundInputs {
  CoordinateSmoothness l;
  DenseVector p;
  DenseVector v;
  double epsilon = 0.0;
  /// f(x0) - f*
  double r0 = 0.0;
  /// Level-set radius; convex bounds only.
  std::optional<double> level_radius;
  /// Strong convexity constant; strongly convex bounds only.
  std::optional<double> lambda;

  std::size_t n() const noexcept { return l.size(); }
  /// Throws ConfigError on shape mismatch or non-positive epsilon / r0.
  void validate() const;
};

/// Same L, epsilon, r0, R0, lambda with p_i = 1/n and v_i = max_j L_j.
BoundInputs uniform_baseline(const BoundInputs& in);

/// min_i p_i / v_i
double min_p_over_v(const BoundInputs& in);
/// max_i v_i / p_i
double max_v_over_p(const BoundInputs& in);

/// Decay schedule: 2 (sqrt(2) r0 / alpha0 + alpha0 S / 2)^2 / ((min p/v)^2 eps^2)
/// with S = sum_i p_i L_i / v_i^2.
double k_nonconvex_decay_at(const BoundInputs& in, double alpha0);
/// The decay bound at the minimizing alpha0: 4 sqrt(2) r0 S / ((min p/v)^2 eps^2).
double k_nonconvex_decay(const BoundInputs& in);

struct FixedFeasibility {
  double lhs;  // sum_i p_i L_i / v_i^2
  double rhs;  // 2 n min_i p_i / v_i
  bool feasible() const noexcept { return lhs < rhs; }
};

FixedFeasibility fixed_feasibility(const BoundInputs& in);

/// Fixed schedule: 2 n r0 / (min p/v (1 - S / (2 n min p/v)) eps^2).
/// ConfigError naming both sides when S >= 2 n min p/v.
double k_nonconvex_fixed(const BoundInputs& in);

/// 8 R0^2 n / (min p/v) (1/eps - 1/r0); 0 once eps >= r0. Needs level_radius.
double k_convex(const BoundInputs& in);

/// max_i(v_i/p_i) / lambda log(2 r0 / eps); 0 once eps >= 2 r0. Needs lambda.
double k_strongly_convex(const BoundInputs& in);

/// The four admissible-t expressions of the convex finite-difference
/// analysis (L = max_i L_i, S3 = sum_i p_i L_i^3 / v_i^2):
///   eps^2 min(p/v) / (8 R0^2 n max sqrt(p) sqrt(2 n L r0))
///   (eps / R0) sqrt(min(p/v) / (n S3))
///   eps / (2 max sqrt(p) sqrt(2 n L r0))
///   2 sqrt(eps / S3)
struct TBound {
  std::array<double, 4> terms;
  double value;  // the minimum
};

TBound t_upper_bound_convex(const BoundInputs& in);

/// Largest t with (t max sqrt(p) sqrt(2 n L r0) + t^2/8 S3) / mu <= eps/2,
/// mu = lambda / max(v/p). Needs lambda.
double t_upper_bound_strongly_convex(const BoundInputs& in);

enum class Regime { NonconvexDecay, NonconvexFixed, Convex, StronglyConvex };

std::string to_string(Regime r);

struct BoundRow {
  std::string strategy;
  Regime regime;
  /// Empty when the regime is infeasible or its inputs are missing.
  std::optional<double> k;
  std::string note;
};

/// One row per regime. Missing inputs and infeasibility are reported in
/// `note` instead of throwing.
std::vector<BoundRow> bound_rows(const std::string& strategy, const BoundInputs& in);

}  // namespace stpis
