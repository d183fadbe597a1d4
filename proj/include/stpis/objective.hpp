#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stpis/numerics.hpp"
#include "stpis/rng.hpp"

namespace stpis {

/// Per-coordinate Lipschitz constants L_i of the gradient. Entries below
/// kFloor are raised to kFloor and their indices kept in clamped().
class CoordinateSmoothness {
 public:
  static constexpr double kFloor = 1e-12;

  explicit CoordinateSmoothness(DenseVector raw);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const DenseVector& values() const noexcept { return values_; }

  double max() const noexcept;
  double sum() const noexcept;

  /// Indices whose raw value was below the floor (or not finite).
  const std::vector<std::size_t>& clamped() const noexcept { return clamped_; }

 private:
  DenseVector values_;
  std::vector<std::size_t> clamped_;
};

/// Optional facts about an objective. The optimizer never reads them; they
/// feed traces (gap column), bounds and defaults.
struct ObjectiveInfo {
  std::optional<double> optimum_value;
  std::optional<CoordinateSmoothness> smoothness;
  std::optional<double> level_radius;
};

/// Black-box objective with an evaluation counter.
///
/// evaluate() is the only access the optimizer has. gradient() exists for
/// trace diagnostics. Instances are single-caller because the counter is
/// mutable; give every parallel run its own clone().
class Objective {
 public:
  virtual ~Objective() = default;

  std::size_t dim() const noexcept { return dim_; }

  /// f(x). Advances the counter by evaluation_cost().
  double evaluate(std::span<const double> x);

  /// f(x + t e_i) with one evaluation; x is not modified.
  double coordinate_probe(std::span<const double> x, std::size_t i, double t);

  std::uint64_t evaluations() const noexcept { return evaluations_; }
  /// Counter increment per evaluate() call.
  virtual std::uint64_t evaluation_cost() const { return 1; }
  void reset_evaluations() noexcept { evaluations_ = 0; }

  virtual bool has_gradient() const { return false; }
  /// Throws Error if has_gradient() is false.
  virtual void gradient(std::span<const double> x, std::span<double> g) const;
  DenseVector gradient(std::span<const double> x) const;

  const ObjectiveInfo& info() const noexcept { return info_; }
  ObjectiveInfo& info() noexcept { return info_; }

  virtual std::unique_ptr<Objective> clone() const = 0;

 protected:
  explicit Objective(std::size_t dim) : dim_(dim) {}
  Objective(const Objective& other)
      : dim_(other.dim_), evaluations_(0), info_(other.info_) {}
  Objective& operator=(const Objective&) = delete;

  virtual double value(std::span<const double> x) = 0;

  void check_dim(std::span<const double> x) const;

 private:
  std::size_t dim_;
  std::uint64_t evaluations_ = 0;
  ObjectiveInfo info_;
  std::vector<double> probe_scratch_;
};

/// Objective backed by plain callables; handy for analytic test functions.
class FunctionObjective final : public Objective {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;

  FunctionObjective(std::size_t dim, ValueFn value, GradientFn gradient = {});

  bool has_gradient() const override { return static_cast<bool>(gradient_); }
  void gradient(std::span<const double> x, std::span<double> g) const override;
  using Objective::gradient;
  std::unique_ptr<Objective> clone() const override;

 protected:
  double value(std::span<const double> x) override { return value_(x); }

 private:
  ValueFn value_;
  GradientFn gradient_;
};

/// g(y) = f(B y). One base evaluation per call; the base counter advances
/// as well as this wrapper's.
class TransformedObjective final : public Objective {
 public:
  TransformedObjective(std::unique_ptr<Objective> base, DenseMatrix b);

  const Objective& base() const noexcept { return *base_; }
  const DenseMatrix& matrix() const noexcept { return b_; }

  bool has_gradient() const override { return base_->has_gradient(); }
  void gradient(std::span<const double> y, std::span<double> g) const override;
  using Objective::gradient;
  std::unique_ptr<Objective> clone() const override;

 protected:
  double value(std::span<const double> y) override;

 private:
  std::unique_ptr<Objective> base_;
  DenseMatrix b_;
  std::vector<double> mapped_;
};

std::unique_ptr<TransformedObjective> make_transformed(std::unique_ptr<Objective> base,
                                                       DenseMatrix b);

/// n x n matrix with independent standard normal entries, row-major draw order.
DenseMatrix gaussian_matrix(std::size_t n, SeededRng& rng);

/// A noisy black box: each call returns one realization of f(x).
class StochasticFunction {
 public:
  virtual ~StochasticFunction() = default;
  virtual std::size_t dim() const = 0;
  virtual double sample(std::span<const double> x, SeededRng& rng) = 0;
  virtual std::unique_ptr<StochasticFunction> clone() const = 0;
};

/// Mean of `repeats` independent realizations per evaluate(); the counter
/// advances by `repeats`. Noise comes from a private generator.
class AveragedObjective final : public Objective {
 public:
  AveragedObjective(std::unique_ptr<StochasticFunction> base, std::uint64_t repeats,
                    SeededRng rng);

  std::uint64_t repeats() const noexcept { return repeats_; }
  std::uint64_t evaluation_cost() const override { return repeats_; }
  std::unique_ptr<Objective> clone() const override;

 protected:
  double value(std::span<const double> x) override;

 private:
  std::unique_ptr<StochasticFunction> base_;
  std::uint64_t repeats_;
  SeededRng rng_;
};

}  // namespace stpis
