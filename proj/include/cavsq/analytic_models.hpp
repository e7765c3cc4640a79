#pragma once

// Closed-form squeezing models: the ideal detuned model, the free-space
// scattering moment model, its low-scattering asymptote, and the optima of
// each.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cavsq/cavity_field.hpp"
#include "cavsq/errors.hpp"

namespace cavsq {

// Ratio used for every "much less than" comparison.
inline constexpr double kMuchLessRatio = 0.1;

enum class DetuningRegime { Below, Intermediate, Crossover, Large };

inline const char* to_string(DetuningRegime r) {
  switch (r) {
    case DetuningRegime::Below: return "below";
    case DetuningRegime::Intermediate: return "intermediate";
    case DetuningRegime::Crossover: return "crossover";
    case DetuningRegime::Large: return "large";
  }
  return "?";
}

// (5/2)^{5/4} 12^{-1/4} S^{-1/2}: smallest x for the intermediate optimum.
inline double detuning_lower_bound(double s) {
  return std::pow(2.5, 1.25) * std::pow(12.0, -0.25) / std::sqrt(s);
}

// 12^{1/6} S^{1/3}: the one-axis-twisting optimum Qx, and the detuning scale
// above which the 2/(Qx x) term stops mattering.
inline double detuning_upper_scale(double s) {
  return std::pow(12.0, 1.0 / 6.0) * std::cbrt(s);
}

inline DetuningRegime classify_detuning(double x, double s) {
  const double ax = std::abs(x);
  if (ax < detuning_lower_bound(s)) return DetuningRegime::Below;
  const double scale = detuning_upper_scale(s);
  if (ax * kMuchLessRatio >= scale) return DetuningRegime::Large;
  if (ax <= kMuchLessRatio * scale) return DetuningRegime::Intermediate;
  return DetuningRegime::Crossover;
}

// ---------------------------------------------------------------------------
// Ideal model

struct IdealModelInput {
  double Qx = 0.0;
  double x = 1.0;
  double S = 1.0;
};

// xi^2 = 1/Qx^2 + 2/(Qx x) + Qx^4 / (24 S^2). Infinite x or S drop their terms.
inline double xi2_ideal(const IdealModelInput& in) {
  if (in.x == 0.0) throw DomainError("xi2_ideal: x = 0 is excluded");
  const double q = in.Qx;
  return 1.0 / (q * q) + 2.0 / (q * in.x) + q * q * q * q / (24.0 * in.S * in.S);
}

struct IdealEvaluation {
  double value = 0.0;
  bool out_of_regime = false;
  std::string reason;
};

// xi2_ideal plus a flag when the approximation cannot hold: a non-physical
// (negative) value or Qx outside 1 << Qx << S.
inline IdealEvaluation xi2_ideal_checked(const IdealModelInput& in) {
  IdealEvaluation ev;
  ev.value = xi2_ideal(in);
  if (!(ev.value >= 0.0)) {
    ev.out_of_regime = true;
    ev.reason = "negative variance";
  } else if (!(kMuchLessRatio * std::abs(in.Qx) >= 1.0) ||
             !(std::abs(in.Qx) <= kMuchLessRatio * in.S)) {
    ev.out_of_regime = true;
    ev.reason = "Qx outside 1 << Qx << S";
  }
  return ev;
}

struct ModelOptimum {
  double Qx = 0.0;
  double xi2 = 0.0;
  DetuningRegime regime = DetuningRegime::Intermediate;
  std::vector<std::string> warnings;
};

// Closed-form optimum of xi2_ideal over Qx.
//   intermediate: Qx* = 12^{1/5} S^{2/5} x^{-1/5}, xi2* = (5/2) 12^{-1/5} S^{-2/5} x^{-4/5}
//   large:        Qx* = 12^{1/6} S^{1/3},          xi2* = (3/2) 12^{-1/3} S^{-2/3}
// In the crossover both branches are tried and the one whose Qx* gives the
// smaller model value wins.
inline ModelOptimum ideal_optimum(double x, double s) {
  if (!(x > 0.0)) throw DomainError("ideal_optimum: x must be positive");
  if (!(s >= 1.0)) throw DomainError("ideal_optimum: S must be >= 1");
  const DetuningRegime regime = classify_detuning(x, s);
  if (regime == DetuningRegime::Below) {
    const double bound = detuning_lower_bound(s);
    throw OutOfRegime("ideal_optimum: x=" + std::to_string(x) +
                          " below the intermediate-regime bound " + std::to_string(bound),
                      bound);
  }
  ModelOptimum mid{std::pow(12.0, 0.2) * std::pow(s, 0.4) * std::pow(x, -0.2),
                   2.5 * std::pow(12.0, -0.2) * std::pow(s, -0.4) * std::pow(x, -0.8),
                   DetuningRegime::Intermediate, {}};
  ModelOptimum large{detuning_upper_scale(s),
                     1.5 * std::pow(12.0, -1.0 / 3.0) * std::pow(s, -2.0 / 3.0),
                     DetuningRegime::Large, {}};
  if (regime == DetuningRegime::Intermediate) return mid;
  if (regime == DetuningRegime::Large) return large;
  ModelOptimum pick = xi2_ideal({mid.Qx, x, s}) <= xi2_ideal({large.Qx, x, s}) ? mid : large;
  pick.regime = DetuningRegime::Crossover;
  pick.warnings.push_back("x between the intermediate and large-detuning regimes");
  return pick;
}

// ---------------------------------------------------------------------------
// Free-space scattering model

struct ScatterModelInput {
  double Qx = 0.0;
  double x = 1.0;
  double S = 1.0;
  double eta = std::numeric_limits<double>::infinity();
};

struct ScatterTerms {
  double Rx = 0.0;   // photons scattered per atom
  double U = 0.0;
  double V = 0.0;
  double W = 0.0;    // <Sy~ Sz + Sz Sy~>
  double Sy2 = 0.0;  // <Sy~^2>
  double Sz2 = 0.0;  // <Sz^2>
};

// Rx = Qx (1 + x^2) / (8 x S eta). Zero for eta = inf.
inline double scattered_photons(double Qx, double x, double s, double eta) {
  if (std::isinf(eta)) return 0.0;
  return Qx * (1.0 + x * x) / (8.0 * x * s * eta);
}

inline ScatterTerms scatter_terms(const ScatterModelInput& in) {
  if (!(in.eta > 0.0)) throw DomainError("scatter model: eta must be positive");
  if (!(in.S >= 1.0)) throw DomainError("scatter model: S must be >= 1");
  if (in.x == 0.0) throw DomainError("scatter model: x = 0 is excluded");
  const double q = in.Qx, x = in.x, s = in.S;
  ScatterTerms t;
  t.Rx = scattered_photons(q, x, s, in.eta);
  const double curvature = q * q * (1.0 - 2.0 * t.Rx / 3.0) / s;
  t.U = 2.0 * q / (x * s) + curvature;
  t.V = q / (2.0 * x * s) + 2.0 * t.Rx + 0.25 * curvature;
  t.Sy2 = 0.5 * s * (1.0 + s * std::exp(-4.0 * t.Rx) * -std::expm1(-t.U));
  t.Sz2 = 0.5 * s;
  t.W = s * (1.0 - t.Rx) * q * std::exp(-t.V);
  return t;
}

enum class FormulaMode { Standard, AsWritten };

// Squeezing from the scattering moment model. Standard mode uses the 2x2
// minimum eigenvalue,
//   (<Sy~^2> + <Sz^2> - sqrt((<Sy~^2> - <Sz^2>)^2 + W^2)) / S;
// AsWritten drops the square on the first difference. Once every atom has
// scattered (Rx >= 1) the mean spin is gone and +inf is returned.
inline double xi2_scatter(const ScatterModelInput& in,
                          FormulaMode mode = FormulaMode::Standard) {
  const ScatterTerms t = scatter_terms(in);
  if (t.Rx >= 1.0) return std::numeric_limits<double>::infinity();
  const double diff = t.Sy2 - t.Sz2;
  double disc = 0.0;
  if (mode == FormulaMode::Standard) {
    disc = diff * diff + t.W * t.W;
  } else {
    disc = diff + t.W * t.W;
    if (disc < 0.0) {
      throw NumericFailure("xi2_scatter: negative discriminant in as-written mode", disc);
    }
  }
  return (t.Sy2 + t.Sz2 - std::sqrt(disc)) / in.S;
}

// Low-scattering asymptote: Qx^-2 + 2/(Qx x) + Qx (x^2 + 1) / (6 x S eta).
inline double xi2_scatter_asymptotic(double Qx, double x, double s, double eta) {
  const double scatter = std::isinf(eta) ? 0.0 : Qx * (x * x + 1.0) / (6.0 * x * s * eta);
  return 1.0 / (Qx * Qx) + 2.0 / (Qx * x) + scatter;
}

// Closed-form optimum of the asymptotic scattering model.
//   small detuning: Qscatt = sqrt(12 S eta / (x^2 + 1)),
//                   xi2* = sqrt(4 (x^2 + 1) / (3 S eta x^2))
//   large detuning: Qscatt = (12 x S eta / (1 + x^2))^{1/3},
//                   xi2* = 3 ((1 + x^2) / (12 x S eta))^{2/3}
inline ModelOptimum scatter_optimum(double x, double s, double eta) {
  if (!(x > 0.0)) throw DomainError("scatter_optimum: x must be positive");
  const double se = s * eta;
  const double x2 = x * x;
  ModelOptimum small{std::sqrt(12.0 * se / (x2 + 1.0)),
                     std::sqrt(4.0 * (x2 + 1.0) / (3.0 * se * x2)),
                     DetuningRegime::Intermediate, {}};
  ModelOptimum large{std::cbrt(12.0 * x * se / (1.0 + x2)),
                     3.0 * std::pow((1.0 + x2) / (12.0 * x * se), 2.0 / 3.0),
                     DetuningRegime::Large, {}};
  const DetuningRegime regime = classify_detuning(x, s);
  ModelOptimum pick;
  if (regime == DetuningRegime::Large) {
    pick = large;
  } else if (regime == DetuningRegime::Crossover) {
    pick = xi2_scatter_asymptotic(small.Qx, x, s, eta) <=
                   xi2_scatter_asymptotic(large.Qx, x, s, eta)
               ? small
               : large;
    pick.regime = DetuningRegime::Crossover;
    pick.warnings.push_back("x between the small and large-detuning branches");
  } else {
    pick = small;
    pick.regime = regime;
  }
  if (se < 10.0) pick.warnings.push_back("collective cooperativity S*eta below 10");
  if (scattered_photons(pick.Qx, x, s, eta) > kMuchLessRatio) {
    pick.warnings.push_back("Rx at the optimum is not small");
  }
  return pick;
}

// ---------------------------------------------------------------------------
// Validity

struct ValidityCheck {
  std::string name;
  double value = 0.0;  // quantity that must be <= threshold
  double threshold = kMuchLessRatio;
  bool pass = false;
};

struct ValidityReport {
  bool small_shift = false;
  bool regime_q = false;
  DetuningRegime detuning_regime = DetuningRegime::Intermediate;
  double small_shift_value = 0.0;
  std::vector<ValidityCheck> checks;
};

// Evaluates the approximations behind the closed-form models. Never throws
// for out-of-regime inputs; every comparison is reported with its margin.
inline ValidityReport validity(const DriveParams& p, double s, double Qx) {
  ValidityReport rep;
  auto add = [&](std::string name, double value) {
    ValidityCheck c{std::move(name), value, kMuchLessRatio, value <= kMuchLessRatio};
    rep.checks.push_back(c);
    return c.pass;
  };
  const double x = p.x();
  rep.small_shift_value =
      p.Omega / p.kappa * std::sqrt(0.5 * s) * (1.0 + std::abs(x)) / (1.0 + x * x);
  rep.small_shift = add("small_shift", rep.small_shift_value);
  const double aq = std::abs(Qx);
  const bool q_lo = add("Qx_above_1", aq > 0.0 ? 1.0 / aq : std::numeric_limits<double>::infinity());
  const bool q_hi = add("Qx_below_S", aq / s);
  rep.regime_q = q_lo && q_hi;

  rep.detuning_regime = classify_detuning(x, s);
  const double lower = detuning_lower_bound(s);
  rep.checks.push_back({"detuning_lower_bound", lower, std::abs(x), std::abs(x) >= lower});
  add("detuning_below_scale", std::abs(x) / detuning_upper_scale(s));

  if (p.rates) {
    const auto& r = *p.rates;
    const double d = std::abs(r.Delta);
    add("dispersive_kappa", p.kappa / d);
    add("dispersive_Gamma", r.Gamma / d);
    add("dispersive_g", std::abs(r.g) / d);
    // Largest steady photon number over the ladder.
    double photons = 0.0;
    for (double m : {-s, s, std::clamp(-p.delta / p.Omega, -s, s)}) {
      if (std::isfinite(m)) photons = std::max(photons, std::norm(steady_field(p, m)));
    }
    add("photon_number", photons / ((d / r.g) * (d / r.g)));
  }
  return rep;
}

}  // namespace cavsq
