#include "stpis/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stpis/errors.hpp"

namespace stpis {

CoordinateSmoothness::CoordinateSmoothness(DenseVector raw) : values_(std::move(raw)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= kFloor) || !std::isfinite(values_[i])) {
      if (std::isinf(values_[i]) && values_[i] > 0) {
        throw NumericalError("CoordinateSmoothness: infinite constant at " + std::to_string(i));
      }
      values_[i] = kFloor;
      clamped_.push_back(i);
    }
  }
}

double CoordinateSmoothness::max() const noexcept {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double CoordinateSmoothness::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

void Objective::check_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw DimensionError("objective expects dimension " + std::to_string(dim_) + ", got " +
                         std::to_string(x.size()));
  }
}

double Objective::evaluate(std::span<const double> x) {
  check_dim(x);
  evaluations_ += evaluation_cost();
  return value(x);
}

double Objective::coordinate_probe(std::span<const double> x, std::size_t i, double t) {
  check_dim(x);
  if (i >= dim_) throw DimensionError("coordinate_probe: coordinate out of range");
  probe_scratch_.assign(x.begin(), x.end());
  probe_scratch_[i] += t;
  return evaluate(probe_scratch_);
}

void Objective::gradient(std::span<const double>, std::span<double>) const {
  throw Error("objective has no gradient");
}

DenseVector Objective::gradient(std::span<const double> x) const {
  check_dim(x);
  DenseVector g(dim_);
  gradient(x, g.span());
  return g;
}

FunctionObjective::FunctionObjective(std::size_t dim, ValueFn value, GradientFn gradient)
    : Objective(dim), value_(std::move(value)), gradient_(std::move(gradient)) {}

void FunctionObjective::gradient(std::span<const double> x, std::span<double> g) const {
  if (!gradient_) Objective::gradient(x, g);
  check_dim(x);
  gradient_(x, g);
}

std::unique_ptr<Objective> FunctionObjective::clone() const {
  return std::make_unique<FunctionObjective>(*this);
}

TransformedObjective::TransformedObjective(std::unique_ptr<Objective> base, DenseMatrix b)
    : Objective(b.cols()), base_(std::move(base)), b_(std::move(b)) {
  if (!base_) throw Error("TransformedObjective: null base");
  if (b_.rows() != b_.cols() || b_.rows() != base_->dim()) {
    throw DimensionError("TransformedObjective: B must be square with side equal to base dim");
  }
  mapped_.resize(b_.rows());
  info().optimum_value = base_->info().optimum_value;
}

double TransformedObjective::value(std::span<const double> y) {
  b_.multiply(y, mapped_);
  return base_->evaluate(mapped_);
}

void TransformedObjective::gradient(std::span<const double> y, std::span<double> g) const {
  check_dim(y);
  const DenseVector x = b_.multiply(y);
  const DenseVector gx = base_->gradient(x.span());
  // g = B^T grad f(B y)
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t r = 0; r < b_.rows(); ++r) {
    const auto row = b_.row(r);
    for (std::size_t c = 0; c < b_.cols(); ++c) g[c] += row[c] * gx[r];
  }
}

std::unique_ptr<Objective> TransformedObjective::clone() const {
  auto copy = std::make_unique<TransformedObjective>(base_->clone(), b_);
  copy->info() = info();
  return copy;
}

std::unique_ptr<TransformedObjective> make_transformed(std::unique_ptr<Objective> base,
                                                       DenseMatrix b) {
  return std::make_unique<TransformedObjective>(std::move(base), std::move(b));
}

DenseMatrix gaussian_matrix(std::size_t n, SeededRng& rng) {
  DenseMatrix b(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) b(r, c) = rng.gaussian();
  }
  return b;
}

AveragedObjective::AveragedObjective(std::unique_ptr<StochasticFunction> base,
                                     std::uint64_t repeats, SeededRng rng)
    : Objective(base ? base->dim() : 0), base_(std::move(base)), repeats_(repeats), rng_(rng) {
  if (!base_) throw Error("AveragedObjective: null base");
  if (repeats_ == 0) throw ConfigError("AveragedObjective: repeats must be positive");
}

double AveragedObjective::value(std::span<const double> x) {
  double acc = 0.0;
  for (std::uint64_t r = 0; r < repeats_; ++r) acc += base_->sample(x, rng_);
  return acc / static_cast<double>(repeats_);
}

std::unique_ptr<Objective> AveragedObjective::clone() const {
  auto copy = std::make_unique<AveragedObjective>(base_->clone(), repeats_, rng_);
  copy->info() = info();
  return copy;
}

}  // namespace stpis
