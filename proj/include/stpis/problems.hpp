#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "stpis/numerics.hpp"
#include "stpis/objective.hpp"

namespace stpis {

/// f(x) = 1/(2m) ||A x - y||^2 + lambda/2 ||x||^2
class RidgeProblem {
 public:
  RidgeProblem(SparseMatrix a, DenseVector y, double lambda);

  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  const SparseMatrix& matrix() const noexcept { return a_; }
  const DenseVector& targets() const noexcept { return y_; }
  double lambda() const noexcept { return lambda_; }
  /// ||A(:, i)||^2, computed once at construction.
  const DenseVector& column_norms_sq() const noexcept { return col_sq_; }

  double value(std::span<const double> x) const;
  /// (1/m) A^T (A x - y) + lambda x
  void gradient(std::span<const double> x, std::span<double> g) const;

 private:
  SparseMatrix a_;
  DenseVector y_;
  double lambda_;
  DenseVector col_sq_;
};

/// f(x) = 1/2 sum_r max(0, 1 - y_r a_r . x)^2 + lambda/2 ||x||^2, labels in {-1, +1}.
class SquaredSvmProblem {
 public:
  /// Throws DataError for labels other than -1 and +1.
  SquaredSvmProblem(SparseMatrix a, DenseVector labels, double lambda);

  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  const SparseMatrix& matrix() const noexcept { return a_; }
  const DenseVector& labels() const noexcept { return labels_; }
  double lambda() const noexcept { return lambda_; }
  const DenseVector& column_norms_sq() const noexcept { return col_sq_; }

  double value(std::span<const double> x) const;
  /// -sum_r max(0, 1 - y_r a_r . x) y_r a_r + lambda x
  void gradient(std::span<const double> x, std::span<double> g) const;

 private:
  SparseMatrix a_;
  DenseVector labels_;
  double lambda_;
  DenseVector col_sq_;
};

/// L_i = (1/m) ||A(:, i)||^2 + lambda. Tight: f is exactly quadratic along e_i.
CoordinateSmoothness exact_smoothness(const RidgeProblem& prob);
/// L_i = ||A(:, i)||^2 + lambda.
CoordinateSmoothness exact_smoothness(const SquaredSvmProblem& prob);

struct RidgeSolution {
  DenseVector x;
  double f;
};

inline constexpr std::size_t kMaxDenseSolve = 10000;

/// Solves ((1/m) A^T A + lambda I) x = (1/m) A^T y by dense Cholesky.
/// ConfigError above kMaxDenseSolve columns; NumericalError if the
/// factorization fails.
RidgeSolution ridge_exact_solve(const RidgeProblem& prob);

struct SyntheticSpec {
  std::size_t m = 1000;
  std::size_t n = 10;
  std::uint64_t seed = 1;
};

/// Standard normal A (drawn row by row) then y from one generator seeded
/// with spec.seed. Column 0 is rescaled to norm 1, every other column to
/// norm 1/m; lambda = 1/m.
RidgeProblem generate_synthetic(const SyntheticSpec& spec);

/// ||x0 - x*||_inf + sqrt(2 (f(x0) - f*) / lambda): every point of the
/// sublevel set {f <= f(x0)} lies within this l-inf distance of x*.
double ridge_level_radius(const RidgeProblem& prob, std::span<const double> x0,
                          const RidgeSolution& solution);

/// Objective view of a shared ridge problem. Clones share the data.
class RidgeObjective final : public Objective {
 public:
  explicit RidgeObjective(std::shared_ptr<const RidgeProblem> prob);

  const RidgeProblem& problem() const noexcept { return *prob_; }

  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> g) const override;
  using Objective::gradient;
  std::unique_ptr<Objective> clone() const override;

 protected:
  double value(std::span<const double> x) override { return prob_->value(x); }

 private:
  std::shared_ptr<const RidgeProblem> prob_;
};

class SvmObjective final : public Objective {
 public:
  explicit SvmObjective(std::shared_ptr<const SquaredSvmProblem> prob);

  const SquaredSvmProblem& problem() const noexcept { return *prob_; }

  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> g) const override;
  using Objective::gradient;
  std::unique_ptr<Objective> clone() const override;

 protected:
  double value(std::span<const double> x) override { return prob_->value(x); }

 private:
  std::shared_ptr<const SquaredSvmProblem> prob_;
};

/// f(x) = 1/2 sum_i L_i x_i^2; optimum 0 at the origin, smoothness exactly L.
class DiagonalQuadratic final : public Objective {
 public:
  explicit DiagonalQuadratic(DenseVector curvatures);

  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> g) const override;
  using Objective::gradient;
  std::unique_ptr<Objective> clone() const override;

 protected:
  double value(std::span<const double> x) override;

 private:
  DenseVector l_;
};

}  // namespace stpis
