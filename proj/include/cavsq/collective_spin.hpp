#pragma once

// Collective spin in the Dicke basis |S, m>: coherent-spin-state amplitudes,
// banded moment evaluation and the perpendicular-variance squeezing parameter.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "cavsq/errors.hpp"
#include "cavsq/phase_band.hpp"

namespace cavsq {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Total spin stored as the integer 2S so half-integer spins are exact.
class EnsembleSpec {
 public:
  static EnsembleSpec from_twice_spin(long two_s) {
    if (two_s <= 0) {
      throw InvalidSpec("EnsembleSpec: total spin must be positive, got 2S=" +
                        std::to_string(two_s));
    }
    return EnsembleSpec(two_s);
  }

  static EnsembleSpec from_spin(double s) {
    const double two_s = 2.0 * s;
    if (!(s > 0.0) || std::abs(two_s - std::round(two_s)) > 1e-9) {
      throw InvalidSpec("EnsembleSpec: S must be a positive multiple of 1/2");
    }
    return EnsembleSpec(std::lround(two_s));
  }

  long twice_spin() const noexcept { return two_s_; }
  double spin() const noexcept { return 0.5 * static_cast<double>(two_s_); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(two_s_) + 1; }
  // m value of ladder index k, k = 0 .. 2S.
  double m(std::size_t k) const noexcept {
    return static_cast<double>(k) - spin();
  }

 private:
  explicit EnsembleSpec(long two_s) : two_s_(two_s) {}
  long two_s_;
};

struct CssAmplitudes {
  std::vector<double> logmag;
  std::vector<int> sign;

  double amplitude(std::size_t k) const {
    return sign[k] * std::exp(logmag[k]);
  }
  std::size_t size() const noexcept { return logmag.size(); }
};

struct MomentSet {
  Vec3 mean{};
  Mat3 second{};  // symmetrized <S_a S_b + S_b S_a>/2

  double covariance(int a, int b) const {
    return second[a][b] - mean[a] * mean[b];
  }
};

struct SqueezeReport {
  double xi2 = 1.0;
  Vec3 mean_spin_dir{};
  Vec3 min_var_dir{};
  double contrast = 1.0;
  double min_variance = 0.0;
};

namespace detail {

inline double spin_guard(const EnsembleSpec& spec) {
  const double s = spec.spin();
  if (!(s > 0.0)) throw InvalidSpec("EnsembleSpec: S must be positive");
  return s;
}

}  // namespace detail

// x-polarized coherent spin state,
//   C_m = 2^{-S} sqrt((2S)! / ((S-m)! (S+m)!)),
// evaluated through lgamma so that large S does not overflow.
inline CssAmplitudes make_css(const EnsembleSpec& spec) {
  const double s = detail::spin_guard(spec);
  const std::size_t dim = spec.dim();
  CssAmplitudes out;
  out.logmag.resize(dim);
  out.sign.assign(dim, 1);
  const double log_norm = std::lgamma(2.0 * s + 1.0) - 2.0 * s * std::numbers::ln2;
  for (std::size_t k = 0; k < dim; ++k) {
    const double m = spec.m(k);
    out.logmag[k] =
        0.5 * (log_norm - std::lgamma(s - m + 1.0) - std::lgamma(s + m + 1.0));
  }
  // Symmetrize explicitly; lgamma(s-m+1) and lgamma(s+m+1) are swapped
  // between k and 2S-k, so this only removes last-bit noise.
  for (std::size_t k = 0; k < dim / 2; ++k) {
    const double avg = 0.5 * (out.logmag[k] + out.logmag[dim - 1 - k]);
    out.logmag[k] = out.logmag[dim - 1 - k] = avg;
  }
  // lgamma of ~2S carries absolute error ~S*eps; renormalize so that the
  // trace stays 1 to rounding at large S.
  const double peak = *std::max_element(out.logmag.begin(), out.logmag.end());
  double sum = 0.0;
  for (double l : out.logmag) sum += std::exp(2.0 * (l - peak));
  const double shift = peak + 0.5 * std::log(sum);
  for (double& l : out.logmag) l -= shift;
  return out;
}

// <m+1| S_+ |m> = sqrt(S(S+1) - m(m+1)).
inline double ladder_element(double s, double m) {
  if (m < -s - 1e-12 || m > s + 1e-12 ||
      std::abs(std::round(s - m) - (s - m)) > 1e-9) {
    throw IndexError("ladder_element: m=" + std::to_string(m) +
                     " outside the ladder of S=" + std::to_string(s));
  }
  // (S - m)(S + m + 1) avoids cancellation near the top of the ladder.
  const double v = (s - m) * (s + m + 1.0);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

// First and second moments of the reduced spin state
//   rho_{m,n} = C_m C_n exp(phi_{m,n}) <phi_n|phi_m>,
// using only the |m - n| <= 2 band. O(S) time and memory.
inline MomentSet moments_from_band(const EnsembleSpec& spec,
                                   const CssAmplitudes& amps,
                                   const PhaseBand& band) {
  const std::size_t dim = spec.dim();
  if (band.dim() != dim || amps.size() != dim) {
    throw InvalidArgument("moments_from_band: dimension mismatch");
  }
  if (!band.complete()) {
    throw IncompleteBand("moments_from_band: band must cover offsets |m-n| <= 2");
  }
  const double s = spec.spin();

  // rho_kk is real: phi_{m,m} = 0 and the self-overlap is 1.
  double z1 = 0.0, z2 = 0.0, pm = 0.0, mp = 0.0;
  cplx sp{}, sp2{}, spz{};  // <S+>, <S+^2>, <S+ Sz + Sz S+>
  for (std::size_t k = 0; k < dim; ++k) {
    const double m = spec.m(k);
    const double ck = amps.amplitude(k);
    const double diag = ck * ck * std::real(band.upper(k, 0).factor());
    const double up = ladder_element(s, m);
    const double down = k > 0 ? ladder_element(s, m - 1.0) : 0.0;
    z1 += m * diag;
    z2 += m * m * diag;
    pm += down * down * diag;  // S+ S-
    mp += up * up * diag;      // S- S+
    if (k + 1 < dim) {
      const cplx r1 = ck * amps.amplitude(k + 1) * band.upper(k, 1).factor();
      sp += up * r1;
      spz += up * (2.0 * m + 1.0) * r1;
    }
    if (k + 2 < dim) {
      const cplx r2 = ck * amps.amplitude(k + 2) * band.upper(k, 2).factor();
      sp2 += up * ladder_element(s, m + 1.0) * r2;
    }
  }

  MomentSet out;
  out.mean = {sp.real(), sp.imag(), z1};
  out.second[0][0] = 0.25 * (2.0 * sp2.real() + pm + mp);
  out.second[1][1] = 0.25 * (pm + mp - 2.0 * sp2.real());
  out.second[2][2] = z2;
  out.second[0][1] = out.second[1][0] = 0.5 * sp2.imag();
  out.second[0][2] = out.second[2][0] = 0.5 * spz.real();
  out.second[1][2] = out.second[2][1] = 0.5 * spz.imag();
  return out;
}

namespace detail {

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double quad_form(const MomentSet& mo, const Vec3& u, const Vec3& v) {
  double acc = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) acc += u[a] * mo.covariance(a, b) * v[b];
  return acc;
}

}  // namespace detail

// Orthonormal pair spanning the plane perpendicular to unit vector n.
inline std::array<Vec3, 2> perpendicular_basis(const Vec3& n) {
  int least = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[least])) least = i;
  Vec3 a{};
  a[least] = 1.0;
  const double proj = detail::dot(a, n);
  Vec3 e1{a[0] - proj * n[0], a[1] - proj * n[1], a[2] - proj * n[2]};
  const double norm = std::sqrt(detail::dot(e1, e1));
  for (double& c : e1) c /= norm;
  return {e1, detail::cross(n, e1)};
}

// xi^2 = min perpendicular variance / (S/2), the minimum taken in closed form
// from the smaller eigenvalue of the 2x2 perpendicular covariance.
inline SqueezeReport squeezing_parameter(const EnsembleSpec& spec,
                                         const MomentSet& moments) {
  const double s = spec.spin();
  const double length = std::sqrt(detail::dot(moments.mean, moments.mean));
  if (!(length >= 1e-9 * s)) {
    throw DegenerateDirection("squeezing_parameter: mean spin vanished (|<S>|=" +
                              std::to_string(length) + ")");
  }
  Vec3 n0 = moments.mean;
  for (double& c : n0) c /= length;
  const auto [e1, e2] = perpendicular_basis(n0);

  const double v11 = detail::quad_form(moments, e1, e1);
  const double v22 = detail::quad_form(moments, e2, e2);
  const double v12 = detail::quad_form(moments, e1, e2);
  const double half_sum = 0.5 * (v11 + v22);
  const double radius = std::hypot(0.5 * (v11 - v22), v12);
  const double lambda_min = half_sum - radius;

  // Major axis at theta_max; the minor axis is a quarter turn away.
  const double theta = 0.5 * std::atan2(2.0 * v12, v11 - v22) + 0.5 * std::numbers::pi;
  const double c = std::cos(theta), sn = std::sin(theta);

  SqueezeReport rep;
  rep.min_variance = std::max(0.0, lambda_min);
  rep.xi2 = rep.min_variance / (0.5 * s);
  rep.mean_spin_dir = n0;
  rep.min_var_dir = {c * e1[0] + sn * e2[0], c * e1[1] + sn * e2[1],
                     c * e1[2] + sn * e2[2]};
  rep.contrast = length / s;
  return rep;
}

}  // namespace cavsq
