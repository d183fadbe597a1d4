#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "stpis/numerics.hpp"

namespace stpis {

struct LabeledDataset {
  SparseMatrix x;
  DenseVector labels;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct ParseOptions {
  /// Column count override; must be at least the largest index seen.
  std::optional<std::size_t> dims;
};

struct ParseResult {
  LabeledDataset dataset;
  /// Lines whose feature indices were not ascending and got sorted.
  std::size_t unsorted_lines = 0;
};

/// Reads `<label> <idx>:<val> ...` lines in one pass. Indices are 1-based
/// in the text and 0-based in memory; `#` starts a comment; blank lines are
/// skipped. Throws ParseError (line, column) for malformed tokens, index 0,
/// duplicate indices, non-finite numbers and qid fields, and DataError when
/// --dims is smaller than the largest index.
ParseResult parse_libsvm(std::istream& in, const ParseOptions& options = {});

/// Reads a file; DataError if it cannot be opened.
ParseResult parse_libsvm_file(const std::string& path, const ParseOptions& options = {});

/// Labels equal to positive_class become +1, all others -1.
LabeledDataset binarize_labels(const LabeledDataset& ds, double positive_class);

/// Canonical text: ascending indices, shortest round-trip numbers, one line
/// per row, '\n' endings. parse_libsvm(write_libsvm(ds)) == ds whenever the
/// last column holds a stored entry (or dims is passed back).
void write_libsvm(const LabeledDataset& ds, std::ostream& out);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace stpis
