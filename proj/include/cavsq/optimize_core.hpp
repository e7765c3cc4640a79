#pragma once

// One-dimensional minimization: coarse pre-grid to bracket the global dip,
// then golden-section refinement inside the bracket.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cavsq/errors.hpp"

namespace cavsq {

struct OptimizeResult {
  double argmin = 0.0;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  double bracket = 0.0;     // final interval width, in the search variable
  bool at_boundary = false; // pre-grid minimum sat on lo or hi
};

enum class Spacing { Linear, Log };

struct MinimizeOptions {
  std::size_t grid_points = 64;
  Spacing spacing = Spacing::Linear;
};

namespace detail {

// Golden-section search on [a, b] for a function assumed unimodal there.
// Returns the best point seen, including both final bracket endpoints.
template <typename F>
OptimizeResult golden_section(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498948482;  // 1/phi
  OptimizeResult r;
  auto eval = [&](double u) {
    ++r.evaluations;
    const double v = f(u);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  auto consider = [&](double u, double v) {
    // Earliest argument wins ties.
    if (v < r.value || (v == r.value && u < r.argmin)) {
      r.value = v;
      r.argmin = u;
    }
  };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  consider(c, fc);
  consider(d, fd);
  consider(a, eval(a));
  consider(b, eval(b));
  r.bracket = b - a;
  return r;
}

}  // namespace detail

// Minimizes objective over [lo, hi]. With log spacing the search variable is
// ln(argument) and tol applies to it; the returned argmin is in the original
// variable. Non-finite objective values count as +inf.
template <typename F>
OptimizeResult minimize_1d(F&& objective, double lo, double hi, double tol,
                           MinimizeOptions opts = {}) {
  if (!(lo < hi)) throw InvalidArgument("minimize_1d: need lo < hi");
  if (!(tol > 0.0)) throw InvalidArgument("minimize_1d: tol must be positive");
  if (opts.grid_points < 3) throw InvalidArgument("minimize_1d: pre-grid needs >= 3 points");
  const bool log = opts.spacing == Spacing::Log;
  if (log && !(lo > 0.0)) throw InvalidArgument("minimize_1d: log spacing needs lo > 0");

  const double ulo = log ? std::log(lo) : lo;
  const double uhi = log ? std::log(hi) : hi;
  auto to_arg = [log](double u) { return log ? std::exp(u) : u; };
  auto f = [&](double u) {
    const double v = objective(to_arg(u));
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  const std::size_t n = opts.grid_points;
  std::vector<double> grid(n), vals(n);
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = i + 1 == n ? uhi : ulo + (uhi - ulo) * static_cast<double>(i) / (n - 1);
    vals[i] = f(grid[i]);
    if (std::isfinite(vals[i]) && (best == n || vals[i] < vals[best])) best = i;
  }
  if (best == n) {
    throw NoMinimum("minimize_1d: objective is not finite anywhere on the pre-grid");
  }

  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[best + 1 == n ? n - 1 : best + 1];
  OptimizeResult r = detail::golden_section(f, a, b, tol);
  r.evaluations += n;
  if (!(r.value < vals[best])) {
    r.value = vals[best];
    r.argmin = grid[best];
  }
  r.argmin = to_arg(r.argmin);
  r.at_boundary = best == 0 || best + 1 == n;
  return r;
}

}  // namespace cavsq
