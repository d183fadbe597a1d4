#pragma once

// Row-reduction kernels behind problem evaluation.
//
// `serial` holds the straightforward single-accumulator loops and is kept as
// the reference the tests check against. `parallel` splits the rows into
// fixed blocks of kBlockRows, reduces each block with OpenMP and then sums the
// block partials in block order. The partition depends only on the matrix
// shape, so parallel results are bit-identical for every thread count; they
// differ from `serial` only by summation order.

#include <cstddef>
#include <span>

#include "stpis/numerics.hpp"

namespace stpis::kernels {

inline constexpr std::size_t kBlockRows = 256;

namespace serial {

/// out = A x
void multiply(const SparseMatrix& a, std::span<const double> x, std::span<double> out);
/// out = A^T w
void transpose_multiply(const SparseMatrix& a, std::span<const double> w, std::span<double> out);
/// sum_r (a_r . x - y_r)^2
double residual_sq_sum(const SparseMatrix& a, std::span<const double> x,
                       std::span<const double> y);
/// sum_r max(0, 1 - y_r a_r . x)^2
double squared_hinge_sum(const SparseMatrix& a, std::span<const double> labels,
                         std::span<const double> x);
/// w_r = -max(0, 1 - y_r a_r . x) y_r, the per-row weight of the squared hinge gradient.
void squared_hinge_weights(const SparseMatrix& a, std::span<const double> labels,
                           std::span<const double> x, std::span<double> w);

}  // namespace serial

namespace parallel {

void multiply(const SparseMatrix& a, std::span<const double> x, std::span<double> out);
void transpose_multiply(const SparseMatrix& a, std::span<const double> w, std::span<double> out);
double residual_sq_sum(const SparseMatrix& a, std::span<const double> x,
                       std::span<const double> y);
double squared_hinge_sum(const SparseMatrix& a, std::span<const double> labels,
                         std::span<const double> x);
void squared_hinge_weights(const SparseMatrix& a, std::span<const double> labels,
                           std::span<const double> x, std::span<double> w);

}  // namespace parallel

}  // namespace stpis::kernels
