#include "table.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace orthoplex::cli {

namespace {

using Json = nlohmann::ordered_json;

bool is_decimal_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

std::string plain(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::count:
    case Cell::Kind::text: return c.text;
    case Cell::Kind::integer: return std::to_string(c.integer);
    case Cell::Kind::real: return format_real(c.real);
    case Cell::Kind::boolean: return c.flag ? "true" : "false";
  }
  return {};
}

Json to_json(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::count:
    case Cell::Kind::text: return c.text;
    case Cell::Kind::integer: return c.integer;
    case Cell::Kind::real:
      if (std::isfinite(c.real)) return c.real;
      return format_real(c.real);
    case Cell::Kind::boolean: return c.flag;
  }
  return nullptr;
}

Cell from_json(const Json& v) {
  if (v.is_boolean()) return Cell::of_bool(v.get<bool>());
  if (v.is_number_integer()) return Cell::of_integer(v.get<std::int64_t>());
  if (v.is_number()) return Cell::of_real(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "nan") return Cell::of_real(std::numeric_limits<double>::quiet_NaN());
    if (s == "inf") return Cell::of_real(std::numeric_limits<double>::infinity());
    if (s == "-inf") return Cell::of_real(-std::numeric_limits<double>::infinity());
    if (is_decimal_integer(s)) return Cell::of_count(BigCount(s));
    return Cell::of_text(s);
  }
  throw std::invalid_argument("unsupported JSON value in row: " + v.dump());
}

void check_homogeneous(const std::vector<Row>& rows) {
  if (rows.empty()) return;
  const auto& first = rows.front().cells();
  for (const auto& row : rows) {
    bool same = row.cells().size() == first.size();
    for (std::size_t i = 0; same && i < first.size(); ++i) same = row.cells()[i].first == first[i].first;
    if (!same) throw std::logic_error("emit: rows do not share one column layout");
  }
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv|json)");
}

bool operator==(const Cell& a, const Cell& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Cell::Kind::count:
    case Cell::Kind::text: return a.text == b.text;
    case Cell::Kind::integer: return a.integer == b.integer;
    case Cell::Kind::real:
      return std::bit_cast<std::uint64_t>(a.real) == std::bit_cast<std::uint64_t>(b.real) ||
             (std::isnan(a.real) && std::isnan(b.real));
    case Cell::Kind::boolean: return a.flag == b.flag;
  }
  return false;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

const Cell* Row::find(std::string_view key) const {
  for (const auto& [k, c] : cells_) {
    if (k == key) return &c;
  }
  return nullptr;
}

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

void emit(const std::vector<Row>& rows, Format format, std::ostream& out,
          const std::vector<std::string>& header) {
  check_homogeneous(rows);
  if (format == Format::json) {
    Json array = Json::array();
    for (const auto& row : rows) {
      Json object = Json::object();
      for (const auto& [key, cell] : row.cells()) object[key] = to_json(cell);
      array.push_back(std::move(object));
    }
    out << array.dump(2) << '\n';
    return;
  }
  std::vector<std::string> keys = header;
  if (!rows.empty()) {
    keys.clear();
    for (const auto& [key, cell] : rows.front().cells()) keys.push_back(key);
  }
  const auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_quote(fields[i]);
    }
    out << '\n';
  };
  if (!keys.empty()) line(keys);
  for (const auto& row : rows) {
    std::vector<std::string> fields;
    for (const auto& [key, cell] : row.cells()) fields.push_back(plain(cell));
    line(fields);
  }
}

std::string emit_to_string(const std::vector<Row>& rows, Format format,
                           const std::vector<std::string>& header) {
  std::ostringstream out;
  emit(rows, format, out, header);
  return out.str();
}

std::vector<Row> parse_json_rows(std::string_view json) {
  const Json array = Json::parse(json);
  if (!array.is_array()) throw std::invalid_argument("expected a JSON array of rows");
  std::vector<Row> rows;
  for (const auto& object : array) {
    Row row;
    for (const auto& [key, value] : object.items()) row.add(key, from_json(value));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace orthoplex::cli
