#include "stpis/problems.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stpis/errors.hpp"
#include "stpis/kernels.hpp"
#include "stpis/rng.hpp"

namespace stpis {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and non-negative");
  }
}

void check_x(std::size_t n, std::span<const double> x) {
  if (x.size() != n) throw DimensionError("problem expects dimension " + std::to_string(n));
}

}  // namespace

RidgeProblem::RidgeProblem(SparseMatrix a, DenseVector y, double lambda)
    : a_(std::move(a)), y_(std::move(y)), lambda_(lambda), col_sq_(column_sq_norms(a_)) {
  if (y_.size() != a_.rows()) throw DimensionError("ridge: target length != rows");
  if (a_.rows() == 0) throw DataError("ridge: no rows");
  check_lambda(lambda_);
}

double RidgeProblem::value(std::span<const double> x) const {
  check_x(cols(), x);
  const double m = static_cast<double>(rows());
  return kernels::parallel::residual_sq_sum(a_, x, y_.span()) / (2.0 * m) +
         0.5 * lambda_ * norm2_sq(x);
}

void RidgeProblem::gradient(std::span<const double> x, std::span<double> g) const {
  check_x(cols(), x);
  check_x(cols(), g);
  std::vector<double> residual(rows());
  kernels::parallel::multiply(a_, x, residual);
  for (std::size_t r = 0; r < rows(); ++r) residual[r] -= y_[r];
  kernels::parallel::transpose_multiply(a_, residual, g);
  const double inv_m = 1.0 / static_cast<double>(rows());
  for (std::size_t i = 0; i < cols(); ++i) g[i] = g[i] * inv_m + lambda_ * x[i];
}

SquaredSvmProblem::SquaredSvmProblem(SparseMatrix a, DenseVector labels, double lambda)
    : a_(std::move(a)), labels_(std::move(labels)), lambda_(lambda), col_sq_(column_sq_norms(a_)) {
  if (labels_.size() != a_.rows()) throw DimensionError("svm: label length != rows");
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    if (labels_[r] != 1.0 && labels_[r] != -1.0) {
      throw DataError("svm: label at row " + std::to_string(r) + " is not -1 or +1");
    }
  }
  check_lambda(lambda_);
}

double SquaredSvmProblem::value(std::span<const double> x) const {
  check_x(cols(), x);
  return 0.5 * kernels::parallel::squared_hinge_sum(a_, labels_.span(), x) +
         0.5 * lambda_ * norm2_sq(x);
}

void SquaredSvmProblem::gradient(std::span<const double> x, std::span<double> g) const {
  check_x(cols(), x);
  check_x(cols(), g);
  std::vector<double> w(rows());
  kernels::parallel::squared_hinge_weights(a_, labels_.span(), x, w);
  kernels::parallel::transpose_multiply(a_, w, g);
  for (std::size_t i = 0; i < cols(); ++i) g[i] += lambda_ * x[i];
}

CoordinateSmoothness exact_smoothness(const RidgeProblem& prob) {
  DenseVector l(prob.cols());
  const double inv_m = 1.0 / static_cast<double>(prob.rows());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = prob.column_norms_sq()[i] * inv_m + prob.lambda();
  return CoordinateSmoothness(std::move(l));
}

CoordinateSmoothness exact_smoothness(const SquaredSvmProblem& prob) {
  DenseVector l(prob.cols());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = prob.column_norms_sq()[i] + prob.lambda();
  return CoordinateSmoothness(std::move(l));
}

RidgeSolution ridge_exact_solve(const RidgeProblem& prob) {
  const std::size_t n = prob.cols();
  if (n > kMaxDenseSolve) {
    throw ConfigError("ridge_exact_solve: n = " + std::to_string(n) + " exceeds the dense limit " +
                      std::to_string(kMaxDenseSolve));
  }
  const double inv_m = 1.0 / static_cast<double>(prob.rows());
  DenseMatrix s(n, n);
  DenseVector rhs(n);
  const auto& a = prob.matrix();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t p = 0; p < row.cols.size(); ++p) {
      rhs[row.cols[p]] += row.values[p] * prob.targets()[r] * inv_m;
      for (std::size_t q = 0; q < row.cols.size(); ++q) {
        s(row.cols[p], row.cols[q]) += row.values[p] * row.values[q] * inv_m;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) s(i, i) += prob.lambda();
  RidgeSolution sol{cholesky_solve(std::move(s), rhs.span()), 0.0};
  sol.f = prob.value(sol.x.span());
  return sol;
}

RidgeProblem generate_synthetic(const SyntheticSpec& spec) {
  if (spec.m == 0 || spec.n == 0) throw ConfigError("synthetic: m and n must be >= 1");
  SeededRng rng(spec.seed);
  std::vector<double> dense(spec.m * spec.n);
  for (auto& v : dense) v = rng.gaussian();
  DenseVector y(spec.m);
  for (auto& v : y) v = rng.gaussian();

  const double m = static_cast<double>(spec.m);
  std::vector<double> targets(spec.n, 1.0 / m);
  targets[0] = 1.0;
  auto normalized = normalize_columns(SparseMatrix::from_dense(spec.m, spec.n, dense), targets);
  if (!normalized.zero_columns.empty()) throw NumericalError("synthetic: zero column drawn");
  return RidgeProblem(std::move(normalized.matrix), std::move(y), 1.0 / m);
}

double ridge_level_radius(const RidgeProblem& prob, std::span<const double> x0,
                          const RidgeSolution& solution) {
  check_x(prob.cols(), x0);
  if (!(prob.lambda() > 0.0)) throw ConfigError("level radius needs lambda > 0");
  double dist = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) dist = std::max(dist, std::abs(x0[i] - solution.x[i]));
  const double gap = std::max(0.0, prob.value(x0) - solution.f);
  return dist + std::sqrt(2.0 * gap / prob.lambda());
}

RidgeObjective::RidgeObjective(std::shared_ptr<const RidgeProblem> prob)
    : Objective(prob ? prob->cols() : 0), prob_(std::move(prob)) {
  if (!prob_) throw Error("RidgeObjective: null problem");
  info().smoothness = exact_smoothness(*prob_);
}

void RidgeObjective::gradient(std::span<const double> x, std::span<double> g) const {
  prob_->gradient(x, g);
}

std::unique_ptr<Objective> RidgeObjective::clone() const {
  return std::make_unique<RidgeObjective>(*this);
}

SvmObjective::SvmObjective(std::shared_ptr<const SquaredSvmProblem> prob)
    : Objective(prob ? prob->cols() : 0), prob_(std::move(prob)) {
  if (!prob_) throw Error("SvmObjective: null problem");
  info().smoothness = exact_smoothness(*prob_);
}

void SvmObjective::gradient(std::span<const double> x, std::span<double> g) const {
  prob_->gradient(x, g);
}

std::unique_ptr<Objective> SvmObjective::clone() const {
  return std::make_unique<SvmObjective>(*this);
}

DiagonalQuadratic::DiagonalQuadratic(DenseVector curvatures)
    : Objective(curvatures.size()), l_(std::move(curvatures)) {
  info().optimum_value = 0.0;
  info().smoothness = CoordinateSmoothness(l_);
}

double DiagonalQuadratic::value(std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += l_[i] * x[i] * x[i];
  return 0.5 * acc;
}

void DiagonalQuadratic::gradient(std::span<const double> x, std::span<double> g) const {
  check_dim(x);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = l_[i] * x[i];
}

std::unique_ptr<Objective> DiagonalQuadratic::clone() const {
  return std::make_unique<DiagonalQuadratic>(*this);
}

}  // namespace stpis
