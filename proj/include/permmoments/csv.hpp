#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "permmoments/core_stats.hpp"

namespace pm {

/// Two-column numeric CSV dialect. Columns are selected by header name or
/// 0-based index; empty selectors mean columns 0 and 1. Blank lines are
/// skipped; every other malformed line is an error.
struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  std::string x_col;
  std::string y_col;
};

/// Parse failure; `row` is the 1-based line number in the input (0 when the
/// problem is not tied to a line).
struct CsvError : InvalidDataset {
  CsvError(const std::string& what, std::size_t row, std::string column = {})
      : InvalidDataset(row ? "line " + std::to_string(row) + (column.empty() ? "" : ", column '" + column + "'") + ": " + what
                           : what),
        row(row),
        column(std::move(column)) {}
  std::size_t row;
  std::string column;
};

/// Strict number parsers. The exact parser accepts integers, decimals with
/// an optional exponent, and "p/q" fractions, and converts them without
/// rounding.
double parse_double(const std::string& text);
Rational parse_rational(const std::string& text);

template <typename Scalar>
Dataset<Scalar> read_csv(std::istream& in, const CsvOptions& opts);
template <typename Scalar>
Dataset<Scalar> read_csv_file(const std::string& path, const CsvOptions& opts);

/// Writes "x,y" plus one row per observation. Doubles use the shortest
/// representation that reads back to the same bits; rationals are written
/// as "p/q".
template <typename Scalar>
void write_csv(std::ostream& out, const Dataset<Scalar>& d, char delimiter = ',');

}  // namespace pm
