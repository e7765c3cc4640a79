#pragma once

// Reduced spin state under continuous drive: shearing strengths, single-time
// evolution and xi^2 trajectories.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cavsq/cavity_field.hpp"
#include "cavsq/collective_spin.hpp"
#include "cavsq/errors.hpp"
#include "cavsq/optimize_core.hpp"
#include "cavsq/parallel.hpp"

namespace cavsq {

struct ShearingPoint {
  double Q = 0.0;
  double Qx = 0.0;
  double t = 0.0;
};

// 4 x / (1 + x^2)^2, the factor relating Qx to Q.
inline double detuning_factor(double x) {
  const double d = 1.0 + x * x;
  return 4.0 * x / (d * d);
}

// Q = 4 S beta0^2 Omega^2 t / kappa and Qx = 4 Q x / (1 + x^2)^2.
inline ShearingPoint shearing_strength(const DriveParams& p, double s, double t) {
  if (!(t >= 0.0)) throw DomainError("shearing_strength: time must be >= 0");
  ShearingPoint sp;
  sp.t = t;
  sp.Q = 4.0 * s * p.beta0 * p.beta0 * p.Omega * p.Omega * t / p.kappa;
  sp.Qx = sp.Q * detuning_factor(p.x());
  return sp;
}

inline double t_from_Q(const DriveParams& p, double s, double Q) {
  if (Q == 0.0) return 0.0;
  const double rate = 4.0 * s * p.beta0 * p.beta0 * p.Omega * p.Omega / p.kappa;
  if (!(rate > 0.0)) {
    throw NoFiniteTime("t_from_Q: Omega*beta0 = 0, no finite time reaches Q=" +
                       std::to_string(Q));
  }
  if (Q < 0.0) throw DomainError("t_from_Q: Q must be >= 0");
  return Q / rate;
}

inline double t_from_Qx(const DriveParams& p, double s, double Qx) {
  if (Qx == 0.0) return 0.0;
  const double f = detuning_factor(p.x());
  if (f == 0.0) {
    throw NoFiniteTime("t_from_Qx: Qx vanishes identically at zero detuning");
  }
  return t_from_Q(p, s, Qx / f);
}

struct EvolveOptions {
  PhaseMode phase_mode = PhaseMode::Analytic;
  OverlapMode overlap_mode = OverlapMode::On;
};

struct EvolveResult {
  MomentSet moments;
  SqueezeReport report;
};

// Spin moments and xi^2 after driving for time t from the x-polarized CSS.
inline EvolveResult evolve(const EnsembleSpec& spec, const CssAmplitudes& css,
                           const DriveParams& p, double t,
                           EvolveOptions opts = {}) {
  const PhaseBand band = make_band(spec, p, t, opts.phase_mode, opts.overlap_mode);
  EvolveResult r;
  r.moments = moments_from_band(spec, css, band);
  r.report = squeezing_parameter(spec, r.moments);
  return r;
}

inline EvolveResult evolve(const EnsembleSpec& spec, const DriveParams& p,
                           double t, EvolveOptions opts = {}) {
  return evolve(spec, make_css(spec), p, t, opts);
}

// Like evolve, but a state whose mean spin has vanished is reported with
// xi2 = +inf instead of raising.
inline EvolveResult evolve_or_sentinel(const EnsembleSpec& spec,
                                       const CssAmplitudes& css,
                                       const DriveParams& p, double t,
                                       EvolveOptions opts = {}) {
  const PhaseBand band = make_band(spec, p, t, opts.phase_mode, opts.overlap_mode);
  EvolveResult r;
  r.moments = moments_from_band(spec, css, band);
  try {
    r.report = squeezing_parameter(spec, r.moments);
  } catch (const DegenerateDirection&) {
    r.report = SqueezeReport{};
    r.report.xi2 = std::numeric_limits<double>::infinity();
    const auto& mu = r.moments.mean;
    r.report.contrast = std::sqrt(mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2]) /
                        spec.spin();
  }
  return r;
}

struct TrajectoryPoint {
  ShearingPoint shear;
  SqueezeReport report;
  MomentSet moments;
};

struct TrajectoryResult {
  std::vector<TrajectoryPoint> points;
  TrajectoryPoint minimum;
};

struct SweepOptions {
  EvolveOptions evolve;
  double refine_rel_tol = 1e-4;
  unsigned threads = 1;
};

// xi^2 on a strictly increasing time grid. The smallest grid value (earliest
// on ties) is refined by golden-section between its grid neighbours.
inline TrajectoryResult sweep_trajectory(const EnsembleSpec& spec,
                                         const DriveParams& p,
                                         std::span<const double> t_grid,
                                         SweepOptions opts = {}) {
  if (t_grid.empty()) throw InvalidArgument("sweep_trajectory: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw DomainError("sweep_trajectory: negative time");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw InvalidArgument("sweep_trajectory: time grid must be strictly increasing");
    }
  }
  const CssAmplitudes css = make_css(spec);
  const double s = spec.spin();
  auto point_at = [&](double t) {
    const EvolveResult e = evolve_or_sentinel(spec, css, p, t, opts.evolve);
    return TrajectoryPoint{shearing_strength(p, s, t), e.report, e.moments};
  };

  TrajectoryResult out;
  out.points.resize(t_grid.size());
  parallel_for(
      t_grid.size(), [&](std::size_t i) { out.points[i] = point_at(t_grid[i]); },
      opts.threads);

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (out.points[i].report.xi2 < out.points[best].report.xi2) best = i;
  }
  out.minimum = out.points[best];
  if (out.points.size() < 2 || !std::isfinite(out.minimum.report.xi2)) return out;

  const double a = t_grid[best == 0 ? 0 : best - 1];
  const double b = t_grid[std::min(best + 1, t_grid.size() - 1)];
  const double tol = opts.refine_rel_tol * std::max(t_grid[best], b);
  const OptimizeResult r = detail::golden_section(
      [&](double t) { return evolve_or_sentinel(spec, css, p, t, opts.evolve).report.xi2; },
      a, b, tol);
  if (r.value < out.minimum.report.xi2) out.minimum = point_at(r.argmin);
  return out;
}

}  // namespace cavsq
