#pragma once

#include <cstddef>
#include <span>

#include "fnls/grid.hpp"

namespace fnls {

/// Complex DFT of a fixed power-of-two length, backed by FFTW.
///
/// Plans are created once per length and shared process-wide; executing a
/// plan is thread-safe. The raw transforms are unnormalized:
///   forward:  F_j = sum_m f_m exp(-2 pi i j m / n)
///   inverse:  f_m = sum_j F_j exp(+2 pi i j m / n)
/// so inverse(forward(f)) = n f.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  void forward_raw(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse_raw(std::span<const cplx> in, std::span<cplx> out) const;

  /// Unitary pair (scaled by 1/sqrt(n) in both directions).
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace fnls
