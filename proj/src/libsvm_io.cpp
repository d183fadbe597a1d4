#include "stpis/libsvm_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "stpis/errors.hpp"

namespace stpis {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

double parse_real(std::string_view text, std::size_t line, std::size_t column,
                  std::string_view what) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, column, "malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(line, column, "non-finite " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

ParseResult parse_libsvm(std::istream& in, const ParseOptions& options) {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  std::vector<double> labels;
  std::size_t max_index = 0;
  std::size_t unsorted = 0;

  std::string raw;
  std::size_t line_no = 0;
  struct Entry {
    std::size_t index;
    double value;
    std::size_t column;
  };
  std::vector<Entry> entries;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;

    labels.push_back(parse_real(tokens[0].text, line_no, tokens[0].column, "label"));
    entries.clear();
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto [text, column] = tokens[t];
      const auto colon = text.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, column, "expected <index>:<value>, got '" + std::string(text) + "'");
      }
      const auto idx_text = text.substr(0, colon);
      if (idx_text == "qid") throw ParseError(line_no, column, "qid fields are not supported");
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
      if (idx_text.empty() || ec != std::errc() || ptr != idx_text.data() + idx_text.size()) {
        throw ParseError(line_no, column, "malformed index '" + std::string(idx_text) + "'");
      }
      if (idx == 0) throw ParseError(line_no, column, "feature indices start at 1");
      const double v = parse_real(text.substr(colon + 1), line_no, column + colon + 1, "value");
      entries.push_back({idx - 1, v, column});
    }
    const auto by_index = [](const Entry& a, const Entry& b) { return a.index < b.index; };
    if (!std::is_sorted(entries.begin(), entries.end(), by_index)) {
      std::stable_sort(entries.begin(), entries.end(), by_index);
      ++unsorted;
    }
    for (std::size_t e = 0; e < entries.size(); ++e) {
      // stable sort keeps the later duplicate second; report that one
      if (e > 0 && entries[e].index == entries[e - 1].index) {
        throw ParseError(line_no, entries[e].column,
                         "duplicate feature index " + std::to_string(entries[e].index + 1));
      }
      col_idx.push_back(entries[e].index);
      values.push_back(entries[e].value);
      max_index = std::max(max_index, entries[e].index + 1);
    }
    row_ptr.push_back(values.size());
  }
  if (in.bad()) throw DataError("read failure after line " + std::to_string(line_no));

  std::size_t cols = max_index;
  if (options.dims) {
    if (*options.dims < max_index) {
      throw DataError("--dims " + std::to_string(*options.dims) +
                      " is smaller than the largest feature index " + std::to_string(max_index));
    }
    cols = *options.dims;
  }
  const std::size_t rows = labels.size();
  ParseResult result{
      {SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values)),
       DenseVector(std::move(labels))},
      unsorted};
  return result;
}

ParseResult parse_libsvm_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_libsvm(in, options);
}

LabeledDataset binarize_labels(const LabeledDataset& ds, double positive_class) {
  LabeledDataset out = ds;
  for (auto& y : out.labels) y = (y == positive_class) ? 1.0 : -1.0;
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_libsvm(const LabeledDataset& ds, std::ostream& out) {
  if (ds.labels.size() != ds.x.rows()) throw DimensionError("write_libsvm: label count != rows");
  std::string line;
  for (std::size_t r = 0; r < ds.x.rows(); ++r) {
    line = format_double(ds.labels[r]);
    const auto row = ds.x.row(r);
    for (std::size_t k = 0; k < row.cols.size(); ++k) {
      line += ' ';
      line += std::to_string(row.cols[k] + 1);
      line += ':';
      line += format_double(row.values[k]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write_libsvm: output stream failure");
}

}  // namespace stpis
