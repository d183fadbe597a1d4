#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stpis/numerics.hpp"
#include "stpis/objective.hpp"

namespace stpis {

/// FIFO ring of queried (x, f(x)) pairs.
class SampleBuffer {
 public:
  static constexpr std::size_t kDefaultCapacity = 4096;

  explicit SampleBuffer(std::size_t dim, std::size_t capacity = kDefaultCapacity);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return size_; }

  /// Appends a pair, evicting the oldest when full.
  void push(std::span<const double> x, double f);

  /// i-th oldest point / value (0 = oldest retained).
  std::span<const double> point(std::size_t i) const noexcept;
  double value(std::size_t i) const noexcept;

 private:
  std::size_t slot(std::size_t i) const noexcept { return (head_ + i) % capacity_; }

  std::size_t dim_;
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::vector<double> points_;
  std::vector<double> values_;
};

/// f(x) ~ c + g.x + 1/2 sum_i h_i x_i^2
struct QuadraticSurrogate {
  double c = 0.0;
  DenseVector g;
  DenseVector h;

  double predict(std::span<const double> x) const;
};

inline constexpr double kSurrogateDamping = 1e-8;
/// Extra iterated-Tikhonov passes after the damped solve.
inline constexpr int kSurrogateRefinements = 8;
/// Smallest admissible pivot of the damped normal matrix relative to its largest.
inline constexpr double kSurrogatePivotFloor = 1e-13;

/// Damped least-squares fit of the diagonal quadratic over the buffered
/// pairs (Householder QR), refined kSurrogateRefinements times toward the
/// undamped solution. Needs at least 2n+1 pairs (ConfigError otherwise);
/// throws NumericalError when the damped system is still numerically
/// singular, in which case callers keep their previous estimate.
QuadraticSurrogate fit_surrogate(const SampleBuffer& buffer, double damping = kSurrogateDamping);

/// L_i = max(h_i, floor); clamped coordinates are listed in the result.
CoordinateSmoothness estimated_smoothness(const QuadraticSurrogate& surrogate);

/// True iff k is a multiple of period. period must be >= 1.
bool refresh_policy(std::uint64_t k, std::uint64_t period);

}  // namespace stpis
