#include "stpis/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stpis/errors.hpp"

namespace stpis {

bool DenseVector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void DenseMatrix::multiply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != cols_ || out.size() != rows_) {
    throw DimensionError("DenseMatrix::multiply: shape mismatch");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row_ptr = data_.data() + r * cols_;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += row_ptr[c] * x[c];
    out[r] = acc;
  }
}

DenseVector DenseMatrix::multiply(std::span<const double> x) const {
  DenseVector out(rows_);
  multiply(x, out.span());
  return out;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("DenseMatrix product: inner dimensions differ");
  DenseMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1) throw DimensionError("CSR: row pointer length must be rows+1");
  if (col_idx_.size() != values_.size()) {
    throw DimensionError("CSR: column index and value arrays differ in length");
  }
  if (row_ptr_.front() != 0 || row_ptr_.back() != values_.size()) {
    throw DimensionError("CSR: row pointers must start at 0 and end at nnz");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1]) throw DimensionError("CSR: row pointers decrease");
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_) throw DimensionError("CSR: column index out of range");
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
        throw DimensionError("CSR: column indices must be strictly increasing within a row");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (t.row >= rows || t.col >= cols) throw DimensionError("triplet outside matrix bounds");
    if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
      throw DimensionError("duplicate triplet at (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ")");
    }
    ++row_ptr[t.row + 1];
    col_idx.push_back(t.col);
    values.push_back(t.value);
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::from_dense(std::size_t rows, std::size_t cols,
                                      std::span<const double> row_major) {
  if (row_major.size() != rows * cols) throw DimensionError("from_dense: size mismatch");
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = row_major[r * cols + c];
      if (v != 0.0) {
        col_idx.push_back(c);
        values.push_back(v);
      }
    }
    row_ptr[r + 1] = values.size();
  }
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back({r, col_idx_[k], values_[k]});
    }
  }
  return out;
}

SparseMatrix SparseMatrix::scale_columns(std::span<const double> scale) const {
  if (scale.size() != cols_) throw DimensionError("scale_columns: scale length != cols");
  auto values = values_;
  for (std::size_t k = 0; k < values.size(); ++k) values[k] *= scale[col_idx_[k]];
  return SparseMatrix(rows_, cols_, row_ptr_, col_idx_, std::move(values));
}

SparseMatrix SparseMatrix::multiply_dense(const DenseMatrix& b) const {
  if (b.rows() != cols_) throw DimensionError("multiply_dense: inner dimensions differ");
  const std::size_t k_cols = b.cols();
  std::vector<double> dense(rows_ * k_cols, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double* out = dense.data() + r * k_cols;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const double a = values_[k];
      const auto brow = b.row(col_idx_[k]);
      for (std::size_t j = 0; j < k_cols; ++j) out[j] += a * brow[j];
    }
  }
  std::vector<std::size_t> row_ptr(rows_ + 1);
  std::vector<std::size_t> col_idx(rows_ * k_cols);
  for (std::size_t r = 0; r <= rows_; ++r) row_ptr[r] = r * k_cols;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < k_cols; ++j) col_idx[r * k_cols + j] = j;
  }
  return SparseMatrix(rows_, k_cols, std::move(row_ptr), std::move(col_idx), std::move(dense));
}

DenseVector column_sq_norms(const SparseMatrix& a) {
  DenseVector c(a.cols());
  const auto& cols = a.col_idx();
  const auto& vals = a.values();
  for (std::size_t k = 0; k < vals.size(); ++k) c[cols[k]] += vals[k] * vals[k];
  return c;
}

NormalizedColumns normalize_columns(const SparseMatrix& a, std::span<const double> target_norms) {
  if (target_norms.size() != a.cols()) {
    throw DimensionError("normalize_columns: target length != cols");
  }
  const DenseVector sq = column_sq_norms(a);
  std::vector<double> scale(a.cols(), 1.0);
  std::vector<std::size_t> zero_columns;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (!(target_norms[j] > 0.0)) {
      throw DimensionError("normalize_columns: target norms must be strictly positive");
    }
    if (sq[j] == 0.0) {
      zero_columns.push_back(j);
    } else {
      scale[j] = target_norms[j] / std::sqrt(sq[j]);
    }
  }
  return {a.scale_columns(scale), std::move(zero_columns)};
}

DenseVector cholesky_solve(DenseMatrix s, std::span<const double> b, double relative_pivot_floor) {
  const std::size_t n = s.rows();
  if (s.cols() != n || b.size() != n) throw DimensionError("cholesky_solve: shape mismatch");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(s(i, i)));
  const double floor = relative_pivot_floor * max_diag;

  // In-place lower factor: s = L L^T.
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= s(j, k) * s(j, k);
    if (!(d > floor) || !(d > 0.0)) {
      throw NumericalError("Cholesky factorization failed at pivot " + std::to_string(j));
    }
    const double ljj = std::sqrt(d);
    s(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= s(i, k) * s(j, k);
      s(i, j) = v / ljj;
    }
  }
  DenseVector x(b);
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    for (std::size_t k = 0; k < i; ++k) v -= s(i, k) * x[k];
    x[i] = v / s(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double v = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) v -= s(k, ii) * x[k];
    x[ii] = v / s(ii, ii);
  }
  return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm1(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += std::abs(v);
  return acc;
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double norm2_sq(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

}  // namespace stpis
