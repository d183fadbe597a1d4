#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace stpis {

/// Fixed-length vector of doubles. The length is set at construction and
/// never changes; iterates, directions and per-coordinate constants all use it.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double value = 0.0) : data_(n, value) {}
  DenseVector(std::initializer_list<double> values) : data_(values) {}
  explicit DenseVector(std::vector<double> values) : data_(std::move(values)) {}
  explicit DenseVector(std::span<const double> values) : data_(values.begin(), values.end()) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  const std::vector<double>& values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

/// Row-major dense matrix; only used for small n x n work (change of
/// variables, normal equations).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  /// out = M x
  void multiply(std::span<const double> x, std::span<double> out) const;
  DenseVector multiply(std::span<const double> x) const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Compressed sparse row matrix. Immutable after construction.
///
/// Invariants checked by every constructor: row pointers are non-decreasing
/// and end at nnz, and column indices are strictly increasing inside a row
/// and below cols(). Explicit zeros are kept as stored entries.
class SparseMatrix {
 public:
  struct RowView {
    std::span<const std::size_t> cols;
    std::span<const double> values;
  };

  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  /// Builds from (row, col, value) triplets in any order. Duplicate
  /// coordinates are rejected.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);

  /// Builds from a row-major dense array, storing every nonzero.
  static SparseMatrix from_dense(std::size_t rows, std::size_t cols,
                                 std::span<const double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  RowView row(std::size_t r) const noexcept {
    const auto begin = row_ptr_[r];
    const auto len = row_ptr_[r + 1] - begin;
    return {{col_idx_.data() + begin, len}, {values_.data() + begin, len}};
  }

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Entries in row-major order.
  std::vector<Triplet> triplets() const;

  /// Returns a copy with every stored value in column j multiplied by scale[j].
  SparseMatrix scale_columns(std::span<const double> scale) const;

  /// Product with a dense n x k matrix; the result is stored densely (every
  /// entry kept, zeros included, so the structure is independent of values).
  SparseMatrix multiply_dense(const DenseMatrix& b) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// c_j = sum_r A(r, j)^2
DenseVector column_sq_norms(const SparseMatrix& a);

struct NormalizedColumns {
  SparseMatrix matrix;
  /// Columns with zero norm; they are left untouched.
  std::vector<std::size_t> zero_columns;
};

/// Rescales every nonzero column j so that its Euclidean norm becomes
/// target_norms[j]. target_norms must be strictly positive.
NormalizedColumns normalize_columns(const SparseMatrix& a, std::span<const double> target_norms);

/// Solves S x = b for symmetric positive definite S by dense Cholesky.
/// Throws NumericalError if a pivot is not positive or falls below
/// relative_pivot_floor times the largest diagonal entry.
DenseVector cholesky_solve(DenseMatrix s, std::span<const double> b,
                           double relative_pivot_floor = 0.0);

double dot(std::span<const double> a, std::span<const double> b);
double norm1(std::span<const double> a);
double norm_inf(std::span<const double> a);
double norm2_sq(std::span<const double> a);

}  // namespace stpis
