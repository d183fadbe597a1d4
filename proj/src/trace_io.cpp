#include "stpis/trace_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "stpis/errors.hpp"
#include "stpis/libsvm_io.hpp"

namespace stpis {

namespace {

constexpr std::string_view kTraceHeader = "k,evals,f,gap,grad_l1,i_k,alpha";
constexpr std::string_view kAggregateHeader = "k,gap_mean,gap_min,gap_max";
constexpr std::string_view kCompareHeader = "k,gap_a,gap_b,ratio";

template <typename T>
void put_optional(std::string& line, const std::optional<T>& v) {
  line += ',';
  if (!v) return;
  if constexpr (std::is_floating_point_v<T>) {
    line += format_double(*v);
  } else {
    line += std::to_string(*v);
  }
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line_no, 1, "bad aggregate field '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << kTraceHeader << '\n';
  std::string line;
  for (const auto& rec : trace.records) {
    line = std::to_string(rec.k);
    line += ',';
    line += std::to_string(rec.evaluations);
    line += ',';
    line += format_double(rec.f);
    put_optional(line, rec.gap);
    put_optional(line, rec.grad_l1);
    put_optional(line, rec.coordinate);
    put_optional(line, rec.alpha);
    line += '\n';
    out << line;
  }
  if (!out) throw Error("trace CSV: output stream failure");
}

void write_aggregate_csv(const Aggregate& agg, std::ostream& out) {
  out << kAggregateHeader << '\n';
  for (std::size_t g = 0; g < agg.k.size(); ++g) {
    out << agg.k[g] << ',' << format_double(agg.mean[g]) << ',' << format_double(agg.min[g]) << ','
        << format_double(agg.max[g]) << '\n';
  }
  if (!out) throw Error("aggregate CSV: output stream failure");
}

Aggregate read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kAggregateHeader) {
    throw DataError("aggregate CSV: expected header '" + std::string(kAggregateHeader) + "'");
  }
  Aggregate agg;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != 4) throw ParseError(line_no, 1, "aggregate row needs 4 fields");
    agg.k.push_back(parse_field<std::uint64_t>(fields[0], line_no));
    agg.mean.push_back(parse_field<double>(fields[1], line_no));
    agg.min.push_back(parse_field<double>(fields[2], line_no));
    agg.max.push_back(parse_field<double>(fields[3], line_no));
  }
  return agg;
}

void write_comparison_csv(const Aggregate& a, const Aggregate& b, std::ostream& out) {
  if (a.k.empty() || b.k.empty()) throw DataError("compare: empty aggregate");
  if (a.k != b.k) throw DataError("compare: k grids differ");
  out << kCompareHeader << '\n';
  for (std::size_t g = 0; g < a.k.size(); ++g) {
    const double ratio = (a.mean[g] == 0.0 && b.mean[g] == 0.0) ? 1.0 : a.mean[g] / b.mean[g];
    out << a.k[g] << ',' << format_double(a.mean[g]) << ',' << format_double(b.mean[g]) << ','
        << format_double(ratio) << '\n';
  }
  if (!out) throw Error("compare CSV: output stream failure");
}

}  // namespace stpis
