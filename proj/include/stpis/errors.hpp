#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stpis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration (maps to CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input data (maps to CLI exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Parse failure anchored at a line and column of the input (both 1-based).
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Non-finite values, failed factorizations (maps to CLI exit code 4).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace stpis
