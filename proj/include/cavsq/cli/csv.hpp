#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "cavsq/errors.hpp"

namespace cavsq::cli {

using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

// Locale-independent, 12 significant digits.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("csv: not a number: '" + std::string(s) + "'");
  }
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<Row> rows;
  // Optional trailing block: a label row then one value row.
  std::vector<std::string> footer_header;
  Row footer;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw InvalidArgument("csv: unknown column '" + std::string(name) + "'");
  }
};

namespace detail {

inline void write_row(std::ostream& os, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    if (const double* d = std::get_if<double>(&row[i])) {
      os << format_number(*d);
    } else {
      os << std::get<std::string>(row[i]);
    }
  }
  os << '\n';
}

inline void write_labels(std::ostream& os, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
  os << '\n';
}

}  // namespace detail

// Comma separated, '\n' line endings. meta, when non-empty, is written first
// as a '#' comment line.
inline std::string to_csv(const CsvTable& t, const std::string& meta = {}) {
  std::ostringstream os;
  if (!meta.empty()) os << "# " << meta << '\n';
  detail::write_labels(os, t.header);
  for (const Row& r : t.rows) detail::write_row(os, r);
  if (!t.footer_header.empty()) {
    detail::write_labels(os, t.footer_header);
    detail::write_row(os, t.footer);
  }
  return os.str();
}

// Parses a table written by to_csv (without footer). Cells that parse as
// numbers become doubles; '#' lines are skipped.
inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    Row row;
    for (const std::string& f : fields) {
      try {
        row.emplace_back(parse_number(f));
      } catch (const InvalidArgument&) {
        row.emplace_back(f);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace cavsq::cli
