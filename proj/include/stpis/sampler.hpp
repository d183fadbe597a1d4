#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "stpis/numerics.hpp"
#include "stpis/objective.hpp"
#include "stpis/rng.hpp"

namespace stpis {

enum class SamplingStrategy { Uniform, SqrtL, L, Custom };

std::string_view to_string(SamplingStrategy s);
/// Accepts the CLI names: uniform, sqrtL, L, custom.
SamplingStrategy parse_sampling_strategy(std::string_view name);

/// Discrete distribution over coordinates, all p_i > 0, sum 1.
///
/// draw() inverts a cumulative table by binary search (O(log n)). The table
/// is immutable; only the caller's generator advances.
class CoordinateSampler {
 public:
  /// p_i = 1/n. Throws ConfigError for n = 0.
  static CoordinateSampler uniform(std::size_t n);
  /// p_i proportional to sqrt(L_i).
  static CoordinateSampler from_sqrt_smoothness(const CoordinateSmoothness& l);
  /// p_i proportional to L_i.
  static CoordinateSampler from_smoothness(const CoordinateSmoothness& l);
  /// User-supplied weights: every entry must be finite and > 0 and the sum
  /// within 1e-9 of 1; the vector is then renormalized.
  static CoordinateSampler custom(std::span<const double> p);

  std::size_t size() const noexcept { return p_.size(); }
  const DenseVector& probabilities() const noexcept { return p_; }
  double operator[](std::size_t i) const noexcept { return p_[i]; }
  SamplingStrategy strategy() const noexcept { return strategy_; }

  std::size_t draw(SeededRng& rng) const noexcept;

 private:
  CoordinateSampler(DenseVector p, SamplingStrategy strategy);
  static CoordinateSampler from_weights(std::vector<double> w, SamplingStrategy strategy);

  DenseVector p_;
  std::vector<double> cdf_;
  SamplingStrategy strategy_;
};

/// Builds the sampler for a strategy. Custom is rejected here; use custom().
CoordinateSampler make_sampler(SamplingStrategy strategy, const CoordinateSmoothness& l);

}  // namespace stpis
