#include "fnls/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "fnls/error.hpp"

namespace fnls {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; execution with new-array interfaces is.
// Plans live until process exit.
PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  std::vector<fftw_complex> in(n), out(n);
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_1d(len, in.data(), out.data(), FFTW_FORWARD, flags),
             fftw_plan_dft_1d(len, in.data(), out.data(), FFTW_BACKWARD, flags)};
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw StructuralError("FFTW could not plan a transform of length " + std::to_string(n));
  }
  cache.emplace(n, p);
  return p;
}

void check(std::size_t n, std::size_t a, std::size_t b) {
  if (a != n || b != n) {
    throw StructuralError("transform of length " + std::to_string(n) + " given buffers of " +
                          std::to_string(a) + " and " + std::to_string(b));
  }
}

fftw_complex* as_fftw(const cplx* p) {
  // fftw_execute_dft does not write to its input for out-of-place complex
  // transforms; the const_cast only satisfies the C signature.
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

void execute(void* plan, std::span<const cplx> in, std::span<cplx> out) {
  // The plans are out-of-place; route aliased calls through a copy.
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(tmp.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(in.data()), as_fftw(out.data()));
  }
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw StructuralError("transform length must be positive");
  const PlanPair p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void Fft::forward_raw(std::span<const cplx> in, std::span<cplx> out) const {
  check(n_, in.size(), out.size());
  execute(forward_plan_, in, out);
}

void Fft::inverse_raw(std::span<const cplx> in, std::span<cplx> out) const {
  check(n_, in.size(), out.size());
  execute(inverse_plan_, in, out);
}

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) const {
  forward_raw(in, out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (auto& z : out) z *= scale;
}

void Fft::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  inverse_raw(in, out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (auto& z : out) z *= scale;
}

}  // namespace fnls
