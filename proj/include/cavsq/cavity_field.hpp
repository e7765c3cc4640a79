#pragma once

// Spin-branch intracavity fields under constant drive and the phase factors
// left on the spin state after the output continuum is traced out.
//
// Units: rates in rad/us, time in us. Only the dimensionless combinations
// (Q, Qx, x, Omega/kappa) enter physical results.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "cavsq/collective_spin.hpp"
#include "cavsq/errors.hpp"
#include "cavsq/phase_band.hpp"

namespace cavsq {

struct PhysicalRates {
  double g = 0.0;
  double Gamma = 0.0;
  double Delta = 0.0;  // |Delta| = omega_a / 2
  double omega_a = 0.0;
  double omega_c = 0.0;
  double omega_l = 0.0;
};

// Effective dispersive model parameters. delta = omega_c - omega_l and the
// normalized detuning x satisfy delta = -x kappa / 2.
struct DriveParams {
  double kappa = 4.0;
  double delta = -2.0;
  double Omega = 0.2;
  double beta0 = 1.0;
  std::optional<PhysicalRates> rates;

  static DriveParams from_x(double kappa, double x, double Omega, double beta0) {
    DriveParams p;
    p.kappa = kappa;
    p.delta = -0.5 * x * kappa;
    p.Omega = Omega;
    p.beta0 = beta0;
    p.validate();
    return p;
  }

  static DriveParams from_delta(double kappa, double delta, double Omega,
                                double beta0) {
    DriveParams p;
    p.kappa = kappa;
    p.delta = delta;
    p.Omega = Omega;
    p.beta0 = beta0;
    p.validate();
    return p;
  }

  // Dispersive shift Omega = 2 g^2 / |Delta| and detuning from the bare
  // frequencies.
  static DriveParams from_rates(double kappa, const PhysicalRates& r,
                                double beta0) {
    if (!(r.Delta != 0.0)) throw InvalidSpec("DriveParams: |Delta| must be nonzero");
    DriveParams p;
    p.kappa = kappa;
    p.delta = r.omega_c - r.omega_l;
    p.Omega = 2.0 * r.g * r.g / std::abs(r.Delta);
    p.beta0 = beta0;
    p.rates = r;
    p.validate();
    return p;
  }

  double x() const noexcept { return -2.0 * delta / kappa; }

  // Single-atom cooperativity 4 g^2 / (kappa Gamma); needs physical rates.
  double eta() const {
    if (!rates) throw InvalidArgument("DriveParams: eta needs physical rates");
    return 4.0 * rates->g * rates->g / (kappa * rates->Gamma);
  }

  void validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
      throw InvalidSpec("DriveParams: kappa must be positive");
    }
    if (!std::isfinite(delta) || !std::isfinite(Omega) || !std::isfinite(beta0)) {
      throw InvalidSpec("DriveParams: non-finite parameter");
    }
    if (beta0 < 0.0) throw InvalidSpec("DriveParams: beta0 must be >= 0");
    if (rates) {
      const double expected = 2.0 * rates->g * rates->g / std::abs(rates->Delta);
      if (std::abs(expected - Omega) > 1e-9 * std::max(std::abs(expected), 1e-300)) {
        throw InvalidSpec("DriveParams: Omega inconsistent with 2g^2/|Delta|");
      }
      if (!(rates->Gamma > 0.0) || !(rates->g != 0.0)) {
        throw InvalidSpec("DriveParams: cooperativity needs g != 0 and Gamma > 0");
      }
    }
  }
};

enum class FieldMode { Transient, Steady };

struct BranchField {
  double m = 0.0;
  cplx value{};
  FieldMode mode = FieldMode::Steady;
};

enum class PhaseMode { Analytic, Numeric };
enum class OverlapMode { On, Off };

namespace detail {

// Complex decay rate of branch m: kappa/2 + i(delta + Omega m).
inline cplx branch_rate(const DriveParams& p, double m) {
  return {0.5 * p.kappa, p.delta + p.Omega * m};
}

// (1 - exp(-a t)) / a, i.e. the integral of exp(-a t') over [0, t].
inline cplx decay_integral(cplx a, double t) {
  const cplx at = a * t;
  if (std::abs(at) < 1e-4) {
    return t * (1.0 - at / 2.0 + at * at / 6.0 - at * at * at / 24.0);
  }
  return (1.0 - std::exp(-at)) / a;
}

inline void require_time(double t, const char* who) {
  if (!(t >= 0.0)) {
    throw DomainError(std::string(who) + ": time must be >= 0, got " +
                      std::to_string(t));
  }
}

}  // namespace detail

inline cplx steady_field(const DriveParams& p, double m) {
  return p.kappa * p.beta0 / detail::branch_rate(p, m);
}

// Intracavity amplitude of branch m after driving an empty cavity for time t
// with beta_in = i sqrt(kappa) beta0.
inline cplx transient_field(const DriveParams& p, double m, double t) {
  detail::require_time(t, "transient_field");
  const cplx a = detail::branch_rate(p, m);
  return p.kappa * p.beta0 * detail::decay_integral(a, t);
}

inline BranchField branch_field(const DriveParams& p, double m,
                                std::optional<double> t = std::nullopt) {
  if (t) return {m, transient_field(p, m, *t), FieldMode::Transient};
  return {m, steady_field(p, m), FieldMode::Steady};
}

struct PhasePair {
  cplx phi{};
  cplx overlap{1.0, 0.0};
};

// Coherent-state inner product <b|a> = exp(-|a|^2/2 - |b|^2/2 + conj(b) a).
inline cplx coherent_overlap(cplx a, cplx b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(b) * a);
}

// Traced-continuum phase phi_{m,n}(t) with the transient branch fields,
// integrated in closed form (every integrand is a sum of exponentials), and
// the intracavity overlap at time t.
inline PhasePair phase_numeric(const DriveParams& p, double m, double n, double t) {
  detail::require_time(t, "phase_numeric");
  if (m == n || p.beta0 == 0.0 || t == 0.0) {
    return {};
  }
  using detail::decay_integral;
  const cplx am = detail::branch_rate(p, m);
  const cplx an = detail::branch_rate(p, n);
  const cplx fm = steady_field(p, m);
  const cplx fn = steady_field(p, n);

  // int_0^t phi_k(t') dt'
  const cplx int_m = fm * (t - decay_integral(am, t));
  const cplx int_n = fn * (t - decay_integral(an, t));
  // int_0^t |phi_k|^2 dt'
  auto int_sq = [t](cplx f, cplx a) {
    return std::norm(f) *
           (t - 2.0 * std::real(decay_integral(a, t)) +
            std::real(decay_integral(2.0 * std::real(a), t)));
  };
  // int_0^t conj(phi_n) phi_m dt'
  const cplx cross =
      std::conj(fn) * fm *
      (t - decay_integral(std::conj(an), t) - decay_integral(am, t) +
       decay_integral(std::conj(an) + am, t));

  // Re(beta_in^* phi_m - beta_in phi_n^*) = sqrt(kappa) beta0 (Im phi_m - Im phi_n)
  const cplx drive_term{0.0, -p.kappa * p.beta0 * (int_m.imag() - int_n.imag())};
  const cplx phi = drive_term - 0.5 * p.kappa * (int_sq(fn, an) + int_sq(fm, am)) +
                   p.kappa * cross;

  const cplx ov = coherent_overlap(transient_field(p, m, t), transient_field(p, n, t));
  if (!std::isfinite(phi.real()) || !std::isfinite(phi.imag()) ||
      !std::isfinite(ov.real()) || !std::isfinite(ov.imag())) {
    throw NumericFailure("phase_numeric: non-finite phase", std::abs(phi));
  }
  return {phi, ov};
}

// Long-time phase factor with steady fields:
//   i |phi_m|^2 |phi_n|^2 Omega^2 t / (kappa beta0^2) *
//   { (kappa^2/4 + delta^2)/(Omega kappa) (n - m) + delta/kappa (n^2 - m^2)
//     + Omega/kappa n m (n - m) + i (n - m)^2 / 2 }
inline cplx phase_analytic(const DriveParams& p, double m, double n, double t) {
  detail::require_time(t, "phase_analytic");
  if (m == n || p.beta0 == 0.0 || t == 0.0) return {};
  const double k = p.kappa, d = p.delta, w = p.Omega;
  const double prefactor = std::norm(steady_field(p, m)) *
                           std::norm(steady_field(p, n)) * w * t /
                           (k * p.beta0 * p.beta0);
  // The linear term is divided by Omega; fold the leading Omega of the
  // prefactor into the brace so Omega = 0 stays finite.
  const double dnm = n - m;
  const double brace_re = (0.25 * k * k + d * d) / k * dnm +
                          w * d / k * (n * n - m * m) + w * w / k * n * m * dnm;
  const double brace_im = w * 0.5 * dnm * dnm;
  return cplx{0.0, 1.0} * prefactor * cplx{brace_re, brace_im};
}

// Intracavity overlap of the steady branch fields.
inline cplx steady_overlap(const DriveParams& p, double m, double n) {
  if (m == n) return {1.0, 0.0};
  return coherent_overlap(steady_field(p, m), steady_field(p, n));
}

// Assembles the |m - n| <= 2 band at time t. Entries are independent.
inline PhaseBand make_band(const EnsembleSpec& spec, const DriveParams& p,
                           double t, PhaseMode phase_mode,
                           OverlapMode overlap_mode) {
  detail::require_time(t, "make_band");
  const std::size_t dim = spec.dim();
  PhaseBand band(dim);
  for (int d = 1; d <= PhaseBand::kWidth; ++d) {
    for (std::size_t k = 0; k + d < dim; ++k) {
      const double m = spec.m(k);
      const double n = spec.m(k + d);
      PhaseBand::Entry& e = band.upper(k, d);
      if (phase_mode == PhaseMode::Analytic) {
        e.phi = phase_analytic(p, m, n, t);
        e.overlap = overlap_mode == OverlapMode::On && t > 0.0
                        ? steady_overlap(p, m, n)
                        : cplx{1.0, 0.0};
      } else {
        const PhasePair pp = phase_numeric(p, m, n, t);
        e.phi = pp.phi;
        e.overlap = overlap_mode == OverlapMode::On ? pp.overlap : cplx{1.0, 0.0};
      }
    }
  }
  return band;
}

}  // namespace cavsq
