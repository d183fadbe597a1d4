#include "stpis/lipschitz_est.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stpis/errors.hpp"

namespace stpis {

SampleBuffer::SampleBuffer(std::size_t dim, std::size_t capacity)
    : dim_(dim), capacity_(capacity), points_(dim * capacity), values_(capacity) {
  if (dim_ == 0) throw ConfigError("SampleBuffer: dimension must be positive");
  if (capacity_ == 0) throw ConfigError("SampleBuffer: capacity must be positive");
}

void SampleBuffer::push(std::span<const double> x, double f) {
  if (x.size() != dim_) throw DimensionError("SampleBuffer::push: dimension mismatch");
  std::size_t target;
  if (size_ < capacity_) {
    target = slot(size_);
    ++size_;
  } else {
    target = head_;
    head_ = (head_ + 1) % capacity_;
  }
  std::copy(x.begin(), x.end(), points_.begin() + static_cast<std::ptrdiff_t>(target * dim_));
  values_[target] = f;
}

std::span<const double> SampleBuffer::point(std::size_t i) const noexcept {
  return {points_.data() + slot(i) * dim_, dim_};
}

double SampleBuffer::value(std::size_t i) const noexcept { return values_[slot(i)]; }

double QuadraticSurrogate::predict(std::span<const double> x) const {
  double f = c;
  for (std::size_t i = 0; i < x.size(); ++i) f += g[i] * x[i] + 0.5 * h[i] * x[i] * x[i];
  return f;
}

namespace {

/// Householder QR of a tall column-major matrix, kept in factored form.
class HouseholderQr {
 public:
  HouseholderQr(std::vector<double> a, std::size_t rows, std::size_t cols)
      : a_(std::move(a)), rows_(rows), cols_(cols), diag_(cols), beta_(cols), col_norm_(cols) {
    for (std::size_t j = 0; j < cols_; ++j) {
      double sq = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) sq += a_[j * rows_ + r] * a_[j * rows_ + r];
      col_norm_[j] = std::sqrt(sq);
    }
    for (std::size_t j = 0; j < cols_; ++j) {
      double* col = a_.data() + j * rows_;
      double norm2 = 0.0;
      for (std::size_t r = j; r < rows_; ++r) norm2 += col[r] * col[r];
      const double norm = std::sqrt(norm2);
      const double alpha = col[j] > 0.0 ? -norm : norm;
      diag_[j] = alpha;
      col[j] -= alpha;
      const double vnorm2 = norm2 - 2.0 * alpha * (col[j] + alpha) + alpha * alpha;
      beta_[j] = vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0;
      for (std::size_t k = j + 1; k < cols_; ++k) reflect(j, a_.data() + k * rows_);
    }
  }

  /// min_j |R_jj| / ||A e_j||: the fraction of each column not explained by earlier ones.
  double min_relative_pivot() const {
    double lo = INFINITY;
    for (std::size_t j = 0; j < cols_; ++j) lo = std::min(lo, std::abs(diag_[j]) / col_norm_[j]);
    return lo;
  }

  /// argmin ||A x - b||
  DenseVector solve(std::vector<double> b) const {
    for (std::size_t j = 0; j < cols_; ++j) reflect(j, b.data());
    DenseVector x(cols_);
    for (std::size_t j = cols_; j-- > 0;) {
      double acc = b[j];
      for (std::size_t k = j + 1; k < cols_; ++k) acc -= r(j, k) * x[k];
      x[j] = acc / diag_[j];
    }
    return x;
  }

 private:
  double r(std::size_t i, std::size_t k) const { return a_[k * rows_ + i]; }

  // y <- (I - beta v v^T) y on rows j.., v stored below the diagonal of column j
  void reflect(std::size_t j, double* y) const {
    if (beta_[j] == 0.0) return;
    const double* v = a_.data() + j * rows_;
    double dot = 0.0;
    for (std::size_t r = j; r < rows_; ++r) dot += v[r] * y[r];
    dot *= beta_[j];
    for (std::size_t r = j; r < rows_; ++r) y[r] -= dot * v[r];
  }

  std::vector<double> a_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> diag_;
  std::vector<double> beta_;
  std::vector<double> col_norm_;
};

}  // namespace

QuadraticSurrogate fit_surrogate(const SampleBuffer& buffer, double damping) {
  const std::size_t n = buffer.dim();
  const std::size_t params = 2 * n + 1;
  const std::size_t samples = buffer.size();
  if (samples < params) {
    throw ConfigError("fit_surrogate: need at least " + std::to_string(params) + " samples, have " +
                      std::to_string(samples));
  }
  // Damped least squares as one tall system [Phi; sqrt(d) I] theta = [f; sqrt(d) theta_prev].
  // Features: [1, x_1..x_n, x_1^2/2..x_n^2/2]. QR avoids squaring the
  // condition number the way the normal equations would.
  const std::size_t rows = samples + params;
  const double root = std::sqrt(damping);
  std::vector<double> design(rows * params, 0.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = buffer.point(s);
    design[s] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      design[(1 + i) * rows + s] = x[i];
      design[(1 + n + i) * rows + s] = 0.5 * x[i] * x[i];
    }
  }
  for (std::size_t a = 0; a < params; ++a) design[a * rows + samples + a] = root;

  const HouseholderQr qr(std::move(design), rows, params);
  // R^T R is the damped normal matrix; its relative pivot floor is the square of this one.
  if (!(qr.min_relative_pivot() >= std::sqrt(kSurrogatePivotFloor))) {
    throw NumericalError("fit_surrogate: design is rank deficient after damping");
  }

  // Iterated Tikhonov: pass j solves min ||Phi t - f||^2 + d ||t - theta_j||^2.
  // The first pass is the plain damped fit; later ones remove the O(d) bias
  // on well-determined directions and leave null directions at zero.
  DenseVector theta(params);
  std::vector<double> rhs(rows, 0.0);
  for (int pass = 0; pass < kSurrogateRefinements + 1; ++pass) {
    for (std::size_t s = 0; s < samples; ++s) rhs[s] = buffer.value(s);
    for (std::size_t a = 0; a < params; ++a) rhs[samples + a] = root * theta[a];
    theta = qr.solve(rhs);
  }

  QuadraticSurrogate s;
  s.c = theta[0];
  s.g = DenseVector(n);
  s.h = DenseVector(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.g[i] = theta[1 + i];
    s.h[i] = theta[1 + n + i];
  }
  return s;
}

CoordinateSmoothness estimated_smoothness(const QuadraticSurrogate& surrogate) {
  return CoordinateSmoothness(surrogate.h);
}

bool refresh_policy(std::uint64_t k, std::uint64_t period) {
  if (period == 0) throw ConfigError("refresh period must be >= 1");
  return k % period == 0;
}

}  // namespace stpis
