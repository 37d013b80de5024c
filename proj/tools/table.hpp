#pragma once

// Result rows and their CSV/JSON serialization.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orthoplex/exact_counts.hpp"

namespace orthoplex::cli {

enum class Format { csv, json };

Format parse_format(std::string_view name);

// One value. Counts keep their full decimal expansion; reals print with 17
// significant digits in CSV and round-trip exactly through JSON.
struct Cell {
  enum class Kind { count, integer, real, text, boolean };

  Kind kind = Kind::text;
  std::string text;  // count digits or text
  std::int64_t integer = 0;
  double real = 0;
  bool flag = false;

  static Cell of_count(const BigCount& value) { return {Kind::count, value.get_str(), 0, 0, false}; }
  static Cell of_integer(std::int64_t value) { return {Kind::integer, {}, value, 0, false}; }
  static Cell of_real(double value) { return {Kind::real, {}, 0, value, false}; }
  static Cell of_text(std::string value) { return {Kind::text, std::move(value), 0, 0, false}; }
  static Cell of_bool(bool value) { return {Kind::boolean, {}, 0, 0, value}; }

  // Bitwise equality for reals, so NaN == NaN here.
  friend bool operator==(const Cell& a, const Cell& b);
};

std::string format_real(double value);

class Row {
 public:
  Row& add(std::string key, Cell cell) {
    cells_.emplace_back(std::move(key), std::move(cell));
    return *this;
  }
  Row& count(std::string key, const BigCount& v) { return add(std::move(key), Cell::of_count(v)); }
  Row& integer(std::string key, std::int64_t v) { return add(std::move(key), Cell::of_integer(v)); }
  Row& real(std::string key, double v) { return add(std::move(key), Cell::of_real(v)); }
  Row& text(std::string key, std::string v) { return add(std::move(key), Cell::of_text(std::move(v))); }
  Row& boolean(std::string key, bool v) { return add(std::move(key), Cell::of_bool(v)); }

  const std::vector<std::pair<std::string, Cell>>& cells() const { return cells_; }
  const Cell* find(std::string_view key) const;

  friend bool operator==(const Row& a, const Row& b) { return a.cells_ == b.cells_; }

 private:
  std::vector<std::pair<std::string, Cell>> cells_;
};

// Writes a header plus one line per row (CSV) or an array of objects (JSON).
// Rows must share the key sequence of the first row; an empty CSV table
// prints `header` if given, else nothing.
void emit(const std::vector<Row>& rows, Format format, std::ostream& out,
          const std::vector<std::string>& header = {});
std::string emit_to_string(const std::vector<Row>& rows, Format format,
                           const std::vector<std::string>& header = {});

// Inverse of the JSON emitter. Strings of decimal digits come back as counts,
// "nan"/"inf"/"-inf" as reals.
std::vector<Row> parse_json_rows(std::string_view json);

std::string csv_quote(std::string_view field);

}  // namespace orthoplex::cli
