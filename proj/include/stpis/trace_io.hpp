#pragma once

#include <iosfwd>

#include "stpis/optimizer.hpp"

namespace stpis {

/// `k,evals,f,gap,grad_l1,i_k,alpha`; absent optionals are empty fields.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

/// `k,gap_mean,gap_min,gap_max`. Without a known optimum the columns carry f.
void write_aggregate_csv(const Aggregate& agg, std::ostream& out);

/// Inverse of write_aggregate_csv. DataError on a wrong header or bad row.
Aggregate read_aggregate_csv(std::istream& in);

/// `k,gap_a,gap_b,ratio` over the mean columns, ratio = gap_a / gap_b
/// (1 when both are zero). DataError when the k grids differ or are empty.
void write_comparison_csv(const Aggregate& a, const Aggregate& b, std::ostream& out);

}  // namespace stpis
