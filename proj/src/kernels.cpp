#include "stpis/kernels.hpp"

#include <algorithm>
#include <vector>

#include "stpis/errors.hpp"

namespace stpis::kernels {

namespace {

inline double row_dot(const SparseMatrix& a, std::size_t r, std::span<const double> x) {
  const auto row = a.row(r);
  double acc = 0.0;
  for (std::size_t k = 0; k < row.cols.size(); ++k) acc += row.values[k] * x[row.cols[k]];
  return acc;
}

inline double hinge(double label, double margin) {
  const double slack = 1.0 - label * margin;
  return slack > 0.0 ? slack : 0.0;
}

void check_x(const SparseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw DimensionError("kernel: x length != matrix cols");
}

void check_rows(const SparseMatrix& a, std::span<const double> v) {
  if (v.size() != a.rows()) throw DimensionError("kernel: row vector length != matrix rows");
}

std::size_t block_count(const SparseMatrix& a) {
  return (a.rows() + kBlockRows - 1) / kBlockRows;
}

// Sums block_fn(begin, end) over the fixed row partition, partials combined in block order.
template <typename BlockFn>
double blocked_sum(const SparseMatrix& a, BlockFn block_fn) {
  const std::size_t blocks = block_count(a);
  if (blocks <= 1) return block_fn(std::size_t{0}, a.rows());
  std::vector<double> partial(blocks, 0.0);
  const long long nblocks = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < nblocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockRows;
    const std::size_t end = std::min(a.rows(), begin + kBlockRows);
    partial[static_cast<std::size_t>(b)] = block_fn(begin, end);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

namespace serial {

void multiply(const SparseMatrix& a, std::span<const double> x, std::span<double> out) {
  check_x(a, x);
  check_rows(a, out);
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = row_dot(a, r, x);
}

void transpose_multiply(const SparseMatrix& a, std::span<const double> w, std::span<double> out) {
  check_rows(a, w);
  if (out.size() != a.cols()) throw DimensionError("kernel: out length != matrix cols");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t k = 0; k < row.cols.size(); ++k) out[row.cols[k]] += row.values[k] * w[r];
  }
}

double residual_sq_sum(const SparseMatrix& a, std::span<const double> x,
                       std::span<const double> y) {
  check_x(a, x);
  check_rows(a, y);
  double acc = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double res = row_dot(a, r, x) - y[r];
    acc += res * res;
  }
  return acc;
}

double squared_hinge_sum(const SparseMatrix& a, std::span<const double> labels,
                         std::span<const double> x) {
  check_x(a, x);
  check_rows(a, labels);
  double acc = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double h = hinge(labels[r], row_dot(a, r, x));
    acc += h * h;
  }
  return acc;
}

void squared_hinge_weights(const SparseMatrix& a, std::span<const double> labels,
                           std::span<const double> x, std::span<double> w) {
  check_x(a, x);
  check_rows(a, labels);
  check_rows(a, w);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    w[r] = -hinge(labels[r], row_dot(a, r, x)) * labels[r];
  }
}

}  // namespace serial

namespace parallel {

void multiply(const SparseMatrix& a, std::span<const double> x, std::span<double> out) {
  check_x(a, x);
  check_rows(a, out);
  const long long rows = static_cast<long long>(a.rows());
#pragma omp parallel for schedule(static) if (a.rows() > kBlockRows)
  for (long long r = 0; r < rows; ++r) {
    out[static_cast<std::size_t>(r)] = row_dot(a, static_cast<std::size_t>(r), x);
  }
}

void transpose_multiply(const SparseMatrix& a, std::span<const double> w, std::span<double> out) {
  check_rows(a, w);
  if (out.size() != a.cols()) throw DimensionError("kernel: out length != matrix cols");
  const std::size_t blocks = block_count(a);
  const std::size_t n = a.cols();
  std::fill(out.begin(), out.end(), 0.0);
  if (blocks <= 1) {
    serial::transpose_multiply(a, w, out);
    return;
  }
  std::vector<double> partial(blocks * n, 0.0);
  const long long nblocks = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < nblocks; ++b) {
    double* acc = partial.data() + static_cast<std::size_t>(b) * n;
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockRows;
    const std::size_t end = std::min(a.rows(), begin + kBlockRows);
    for (std::size_t r = begin; r < end; ++r) {
      const auto row = a.row(r);
      for (std::size_t k = 0; k < row.cols.size(); ++k) acc[row.cols[k]] += row.values[k] * w[r];
    }
  }
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* acc = partial.data() + b * n;
    for (std::size_t j = 0; j < n; ++j) out[j] += acc[j];
  }
}

double residual_sq_sum(const SparseMatrix& a, std::span<const double> x,
                       std::span<const double> y) {
  check_x(a, x);
  check_rows(a, y);
  return blocked_sum(a, [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      const double res = row_dot(a, r, x) - y[r];
      acc += res * res;
    }
    return acc;
  });
}

double squared_hinge_sum(const SparseMatrix& a, std::span<const double> labels,
                         std::span<const double> x) {
  check_x(a, x);
  check_rows(a, labels);
  return blocked_sum(a, [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      const double h = hinge(labels[r], row_dot(a, r, x));
      acc += h * h;
    }
    return acc;
  });
}

void squared_hinge_weights(const SparseMatrix& a, std::span<const double> labels,
                           std::span<const double> x, std::span<double> w) {
  check_x(a, x);
  check_rows(a, labels);
  check_rows(a, w);
  const long long rows = static_cast<long long>(a.rows());
#pragma omp parallel for schedule(static) if (a.rows() > kBlockRows)
  for (long long r = 0; r < rows; ++r) {
    const auto i = static_cast<std::size_t>(r);
    w[i] = -hinge(labels[i], row_dot(a, i, x)) * labels[i];
  }
}

}  // namespace parallel

}  // namespace stpis::kernels
