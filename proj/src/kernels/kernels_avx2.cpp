// AVX2 variants. Built with -mavx2 but without -mfma so that elementwise
// kernels round exactly like the scalar reference; only the reductions
// differ, through summation order.

#include "kernel_tables.hpp"

#if defined(FNLS_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace fnls::kernels::detail {
namespace {

// Two interleaved complex numbers per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_sw, b_im));
}

// |u|^2 of u[j..j+3], returned in lane order (0, 2, 1, 3).
inline __m256d abs2x4_shuffled(const cplx* u) {
  const __m256d a = load2(u);
  const __m256d b = load2(u + 2);
  return _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
}

// Swap the middle lanes: (0,1,2,3) <-> (0,2,1,3). Self-inverse.
inline __m256d swap_mid(__m256d v) { return _mm256_permute4x64_pd(v, 0xD8); }

inline double abs2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

void mul_complex_avx2(cplx* u, const cplx* w, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) store2(u + j, cmul(load2(u + j), load2(w + j)));
  for (; j < n; ++j) {
    const double ar = u[j].real(), ai = u[j].imag();
    const double br = w[j].real(), bi = w[j].imag();
    u[j] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void mul_real_avx2(cplx* u, const double* w, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m128d w01 = _mm_loadu_pd(w + j);
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w01), 0x50);
    store2(u + j, _mm256_mul_pd(load2(u + j), ww));
  }
  for (; j < n; ++j) u[j] = cplx(u[j].real() * w[j], u[j].imag() * w[j]);
}

void phase_angles_avx2(const cplx* u, const double* v, const double* g, double dt,
                       double* theta, std::size_t n) {
  const __m256d vdt = _mm256_set1_pd(dt);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a2 = abs2x4_shuffled(u + j);
    const __m256d vv = swap_mid(_mm256_loadu_pd(v + j));
    const __m256d gg = swap_mid(_mm256_loadu_pd(g + j));
    const __m256d t = _mm256_mul_pd(vdt, _mm256_add_pd(vv, _mm256_mul_pd(gg, a2)));
    _mm256_storeu_pd(theta + j, swap_mid(t));
  }
  for (; j < n; ++j) theta[j] = dt * (v[j] + g[j] * abs2(u[j]));
}

PowerSums power_sums_avx2(const cplx* u, std::size_t n) {
  __m256d s2 = _mm256_setzero_pd();
  __m256d s4 = _mm256_setzero_pd();
  __m256d s6 = _mm256_setzero_pd();
  __m256d mx = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a2 = abs2x4_shuffled(u + j);
    const __m256d a4 = _mm256_mul_pd(a2, a2);
    s2 = _mm256_add_pd(s2, a2);
    s4 = _mm256_add_pd(s4, a4);
    s6 = _mm256_add_pd(s6, _mm256_mul_pd(a4, a2));
    mx = _mm256_max_pd(mx, a2);
  }
  PowerSums out{hsum(s2), hsum(s4), hsum(s6), hmax(mx)};
  for (; j < n; ++j) {
    const double a2 = abs2(u[j]);
    out.sum2 += a2;
    out.sum4 += a2 * a2;
    out.sum6 += a2 * a2 * a2;
    out.max2 = std::max(out.max2, a2);
  }
  return out;
}

double weighted_abs2_avx2(const cplx* u, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d ww = swap_mid(_mm256_loadu_pd(w + j));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(ww, abs2x4_shuffled(u + j)));
  }
  double out = hsum(acc);
  for (; j < n; ++j) out += w[j] * abs2(u[j]);
  return out;
}

double weighted_abs4_avx2(const cplx* u, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d ww = swap_mid(_mm256_loadu_pd(w + j));
    const __m256d a2 = abs2x4_shuffled(u + j);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(ww, a2), a2));
  }
  double out = hsum(acc);
  for (; j < n; ++j) {
    const double a2 = abs2(u[j]);
    out += w[j] * a2 * a2;
  }
  return out;
}

void running_max_abs_avx2(double* m, const cplx* u, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_sqrt_pd(abs2x4_shuffled(u + j));
    const __m256d cur = swap_mid(_mm256_loadu_pd(m + j));
    _mm256_storeu_pd(m + j, swap_mid(_mm256_max_pd(cur, a)));
  }
  for (; j < n; ++j) m[j] = std::max(m[j], std::sqrt(abs2(u[j])));
}

constexpr KernelTable kAvx2{
    Backend::avx2,    mul_complex_avx2,   mul_real_avx2,      phase_angles_avx2,
    power_sums_avx2,  weighted_abs2_avx2, weighted_abs4_avx2, running_max_abs_avx2,
};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

}  // namespace fnls::kernels::detail

#else

namespace fnls::kernels::detail {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace fnls::kernels::detail

#endif
