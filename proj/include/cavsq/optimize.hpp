#pragma once

// Optimization over shearing strength and detuning, and power-law scaling
// of the optimal squeezing with ensemble size.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cavsq/analytic_models.hpp"
#include "cavsq/dynamics.hpp"
#include "cavsq/errors.hpp"
#include "cavsq/optimize_core.hpp"
#include "cavsq/parallel.hpp"

namespace cavsq {

// Qx search window for the exact dynamics: [0.1, min(4S, 1000)], log grid.
struct QxSearch {
  double lo = 0.1;
  double hi = 0.0;  // 0 selects min(4S, 1000)
  std::size_t grid_points = 200;
  double log_tol = 1e-6;

  double upper(double s) const { return hi > 0.0 ? hi : std::min(4.0 * s, 1000.0); }
};

// Minimal xi^2 of the exact phase-model dynamics over Qx at fixed drive.
// The argmin is reported as Qx.
inline OptimizeResult minimize_exact_over_qx(const EnsembleSpec& spec,
                                             const DriveParams& p,
                                             EvolveOptions evolve_opts = {},
                                             QxSearch search = {}) {
  const CssAmplitudes css = make_css(spec);
  const double s = spec.spin();
  auto objective = [&](double qx) {
    const double t = t_from_Qx(p, s, qx);
    return evolve_or_sentinel(spec, css, p, t, evolve_opts).report.xi2;
  };
  return minimize_1d(objective, search.lo, search.upper(s), search.log_tol,
                     {search.grid_points, Spacing::Log});
}

// Minimal xi^2 of the ideal model over Qx in [1, S] unless overridden.
inline OptimizeResult minimize_ideal_over_qx(double x, double s, double lo = 1.0,
                                             double hi = 0.0) {
  return minimize_1d([&](double q) { return xi2_ideal({q, x, s}); }, lo,
                     hi > 0.0 ? hi : s, 1e-9, {400, Spacing::Log});
}

// Minimal xi^2 of the scattering model over Qx in [0.1, 4S] unless overridden.
inline OptimizeResult minimize_scatter_over_qx(double x, double s, double eta,
                                               FormulaMode mode = FormulaMode::Standard,
                                               double lo = 0.1, double hi = 0.0) {
  return minimize_1d([&](double q) { return xi2_scatter({q, x, s, eta}, mode); }, lo,
                     hi > 0.0 ? hi : 4.0 * s, 1e-9, {400, Spacing::Log});
}

struct DetuningOptimum {
  double x = 0.0;
  OptimizeResult inner;  // over Qx at the optimal x
  OptimizeResult outer;  // over x
};

// Nested minimization of the scattering model: inner over Qx, outer over x
// on a log grid refined by golden-section. A degenerate range (lo == hi)
// only does the inner minimization.
inline DetuningOptimum optimal_over_detuning(double s, double eta, double x_lo,
                                             double x_hi,
                                             FormulaMode mode = FormulaMode::Standard) {
  if (!(x_lo > 0.0) || !(x_hi >= x_lo)) {
    throw InvalidArgument("optimal_over_detuning: need 0 < x_lo <= x_hi");
  }
  DetuningOptimum out;
  if (x_lo == x_hi) {
    out.x = x_lo;
    out.inner = minimize_scatter_over_qx(x_lo, s, eta, mode);
    out.outer = out.inner;
    out.outer.argmin = x_lo;
    return out;
  }
  out.outer = minimize_1d(
      [&](double x) { return minimize_scatter_over_qx(x, s, eta, mode).value; }, x_lo,
      x_hi, 1e-6, {64, Spacing::Log});
  out.x = out.outer.argmin;
  out.inner = minimize_scatter_over_qx(out.x, s, eta, mode);
  return out;
}

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

// Least-squares line through (ln x, ln y): y ~ prefactor * x^exponent.
inline PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw InvalidArgument("fit_power_law: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw DomainError("fit_power_law: values must be positive");
    }
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(xs[i]) - mx, dy = std::log(ys[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("fit_power_law: all abscissae equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

enum class ScalingMode { Exact, Analytic };

struct ScalingConfig {
  double kappa = 4.0;
  double Omega = 0.01;
  double beta0 = 1.0;
  double x = 1.0;
  EvolveOptions evolve;
  QxSearch search;
  unsigned threads = 1;
};

struct ScalingPoint {
  double S = 0.0;
  double Qx_opt = 0.0;
  double xi2_min = 0.0;
  bool at_boundary = false;
  bool used_in_fit = true;
};

struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  std::vector<ScalingPoint> points;
};

// Optimal xi^2 for each S, then a log-log fit. Exact mode minimizes the phase
// model over Qx; analytic mode takes the ideal-model closed forms. Minima that
// land on the search boundary are listed but left out of the fit.
inline ScalingFit scaling_fit(const ScalingConfig& cfg, std::span<const double> s_list,
                              ScalingMode mode) {
  if (s_list.size() < 4) throw InvalidArgument("scaling_fit: need at least 4 values of S");
  for (std::size_t i = 1; i < s_list.size(); ++i) {
    if (!(s_list[i] > s_list[i - 1])) {
      throw InvalidArgument("scaling_fit: S list must be increasing");
    }
  }
  const DriveParams p = DriveParams::from_x(cfg.kappa, cfg.x, cfg.Omega, cfg.beta0);

  ScalingFit fit;
  fit.points.resize(s_list.size());
  parallel_for(
      s_list.size(),
      [&](std::size_t i) {
        const double s = s_list[i];
        ScalingPoint& pt = fit.points[i];
        pt.S = s;
        try {
          if (mode == ScalingMode::Exact) {
            const OptimizeResult r =
                minimize_exact_over_qx(EnsembleSpec::from_spin(s), p, cfg.evolve, cfg.search);
            pt.Qx_opt = r.argmin;
            pt.xi2_min = r.value;
            pt.at_boundary = r.at_boundary;
          } else {
            const ModelOptimum o = ideal_optimum(cfg.x, s);
            pt.Qx_opt = o.Qx;
            pt.xi2_min = o.xi2;
          }
        } catch (const OutOfRegime& e) {
          throw OutOfRegime("scaling_fit: S=" + std::to_string(s) + ": " + e.what(), e.bound());
        } catch (const Error& e) {
          throw NumericFailure("scaling_fit: minimization failed at S=" + std::to_string(s) +
                                   ": " + e.what(),
                               std::numeric_limits<double>::quiet_NaN());
        }
        pt.used_in_fit = !pt.at_boundary && std::isfinite(pt.xi2_min) && pt.xi2_min > 0.0;
      },
      cfg.threads);

  std::vector<double> xs, ys;
  for (const auto& pt : fit.points) {
    if (!pt.used_in_fit) continue;
    xs.push_back(pt.S);
    ys.push_back(pt.xi2_min);
  }
  if (xs.size() < 4) {
    throw NumericFailure("scaling_fit: fewer than 4 interior minima to fit",
                         std::numeric_limits<double>::quiet_NaN());
  }
  const PowerLawFit pl = fit_power_law(xs, ys);
  fit.exponent = pl.exponent;
  fit.prefactor = pl.prefactor;
  fit.r_squared = pl.r_squared;
  return fit;
}

}  // namespace cavsq
