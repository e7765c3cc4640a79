#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "cavsq/errors.hpp"

namespace cavsq {

using cplx = std::complex<double>;

// Banded storage of the reduced-state phase factors phi_{m,n} and the
// intracavity overlaps <phi_n|phi_m> for |m - n| <= 2. Only the upper band
// (n = m + d, d >= 0) is stored; the lower band follows from Hermitian
// symmetry. Index k runs over the Dicke ladder, m_k = -S + k.
class PhaseBand {
 public:
  static constexpr int kWidth = 2;

  struct Entry {
    cplx phi{0.0, 0.0};
    cplx overlap{1.0, 0.0};
    cplx factor() const { return std::exp(phi) * overlap; }
  };

  PhaseBand() = default;

  // Allocates offsets 0..max_offset. A band built with max_offset < 2 is
  // rejected by the moment evaluator.
  explicit PhaseBand(std::size_t dim, int max_offset = kWidth)
      : dim_(dim), max_offset_(max_offset) {
    if (max_offset < 0 || max_offset > kWidth) {
      throw InvalidArgument("PhaseBand: max_offset must be in [0, 2]");
    }
    for (int d = 0; d <= max_offset_; ++d) {
      rows_[d].assign(dim > static_cast<std::size_t>(d) ? dim - d : 0, Entry{});
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  int max_offset() const noexcept { return max_offset_; }

  // True when every offset a spin observable up to second order touches is
  // populated. For tiny ladders some offsets have no entries at all.
  bool complete() const noexcept {
    const int needed = dim_ > 2 ? kWidth : static_cast<int>(dim_) - 1;
    return max_offset_ >= needed;
  }

  Entry& upper(std::size_t k, int d) { return rows_.at(d).at(k); }
  const Entry& upper(std::size_t k, int d) const { return rows_.at(d).at(k); }

  // Element (k, k + d) for d in [-2, 2].
  Entry at(std::size_t k, int d) const {
    if (d >= 0) return upper(k, d);
    if (k < static_cast<std::size_t>(-d)) {
      throw IndexError("PhaseBand: row index below band");
    }
    const Entry& e = upper(k - static_cast<std::size_t>(-d), -d);
    return Entry{std::conj(e.phi), std::conj(e.overlap)};
  }

 private:
  std::size_t dim_ = 0;
  int max_offset_ = -1;
  std::array<std::vector<Entry>, kWidth + 1> rows_;
};

}  // namespace cavsq
