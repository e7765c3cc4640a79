#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cavsq/cli/csv.hpp"
#include "cavsq/errors.hpp"

namespace cavsq::cli {

struct SvgOptions {
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

namespace detail {

inline std::string fixed2(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// Single-panel line plot of column y against column x. Points that are not
// finite (or not positive on a log axis) are skipped.
inline std::string emit_svg(const CsvTable& table, const std::string& x_col,
                            const std::string& y_col, SvgOptions opts = {}) {
  const std::size_t xi = table.column(x_col);
  const std::size_t yi = table.column(y_col);
  if (table.rows.empty()) throw InvalidArgument("svg: table has no data rows");

  auto value = [](const Cell& c) {
    const double* d = std::get_if<double>(&c);
    return d ? *d : std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<std::pair<double, double>> pts;
  for (const Row& r : table.rows) {
    double x = value(r.at(xi)), y = value(r.at(yi));
    if (opts.log_x) x = x > 0.0 ? std::log10(x) : NAN;
    if (opts.log_y) y = y > 0.0 ? std::log10(y) : NAN;
    if (std::isfinite(x) && std::isfinite(y)) pts.emplace_back(x, y);
  }
  if (pts.empty()) throw InvalidArgument("svg: no plottable points");

  double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
  for (const auto& [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }

  const double left = 70, right = 20, top = 20, bottom = 50;
  const double pw = opts.width - left - right, ph = opts.height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  auto label = [](double v, bool log) { return format_number(log ? std::pow(10.0, v) : v); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
     << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width << ' '
     << opts.height << "\">\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
     << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << (i ? " " : "") << detail::fixed2(sx(pts[i].first)) << ','
       << detail::fixed2(sy(pts[i].second));
  }
  os << "\"/>\n";
  const std::string font = "font-family=\"sans-serif\" font-size=\"11\"";
  os << "<text x=\"" << left << "\" y=\"" << opts.height - 30 << "\" " << font << ">"
     << label(x0, opts.log_x) << "</text>\n";
  os << "<text x=\"" << left + pw << "\" y=\"" << opts.height - 30 << "\" " << font
     << " text-anchor=\"end\">" << label(x1, opts.log_x) << "</text>\n";
  os << "<text x=\"" << left - 5 << "\" y=\"" << top + ph << "\" " << font
     << " text-anchor=\"end\">" << label(y0, opts.log_y) << "</text>\n";
  os << "<text x=\"" << left - 5 << "\" y=\"" << top + 10 << "\" " << font
     << " text-anchor=\"end\">" << label(y1, opts.log_y) << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << opts.height - 10 << "\" " << font
     << " text-anchor=\"middle\">" << x_col << (opts.log_x ? " (log)" : "") << "</text>\n";
  os << "<text x=\"15\" y=\"" << top + ph / 2 << "\" " << font
     << " text-anchor=\"middle\" transform=\"rotate(-90 15 " << top + ph / 2 << ")\">"
     << y_col << (opts.log_y ? " (log)" : "") << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace cavsq::cli
