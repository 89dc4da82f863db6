// NEON variants for aarch64. One complex number per 128-bit register.

#include "kernel_tables.hpp"

#if defined(FNLS_HAVE_NEON) && defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace fnls::kernels::detail {
namespace {

inline float64x2_t load1(const cplx* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }
inline void store1(cplx* p, float64x2_t v) { vst1q_f64(reinterpret_cast<double*>(p), v); }

// Squares summed pairwise so the rounding matches re*re + im*im.
inline double abs2(float64x2_t a) {
  const float64x2_t sq = vmulq_f64(a, a);
  return vgetq_lane_f64(sq, 0) + vgetq_lane_f64(sq, 1);
}

void mul_complex_neon(cplx* u, const cplx* w, std::size_t n) {
  const double sign_data[2] = {-1.0, 1.0};
  const float64x2_t sign = vld1q_f64(sign_data);
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t a = load1(u + j);
    const float64x2_t b = load1(w + j);
    const float64x2_t b_re = vdupq_laneq_f64(b, 0);
    const float64x2_t b_im = vdupq_laneq_f64(b, 1);
    const float64x2_t a_sw = vextq_f64(a, a, 1);
    const float64x2_t t1 = vmulq_f64(a, b_re);
    const float64x2_t t2 = vmulq_f64(vmulq_f64(a_sw, b_im), sign);
    store1(u + j, vaddq_f64(t1, t2));
  }
}

void mul_real_neon(cplx* u, const double* w, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) store1(u + j, vmulq_f64(load1(u + j), vdupq_n_f64(w[j])));
}

void phase_angles_neon(const cplx* u, const double* v, const double* g, double dt, double* theta,
                       std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const double a0 = abs2(load1(u + j));
    const double a1 = abs2(load1(u + j + 1));
    const double a_data[2] = {a0, a1};
    const float64x2_t a2 = vld1q_f64(a_data);
    const float64x2_t t =
        vmulq_n_f64(vaddq_f64(vld1q_f64(v + j), vmulq_f64(vld1q_f64(g + j), a2)), dt);
    vst1q_f64(theta + j, t);
  }
  for (; j < n; ++j) theta[j] = dt * (v[j] + g[j] * abs2(load1(u + j)));
}

PowerSums power_sums_neon(const cplx* u, std::size_t n) {
  float64x2_t s2 = vdupq_n_f64(0.0), s4 = s2, s6 = s2, mx = s2;
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const double a_data[2] = {abs2(load1(u + j)), abs2(load1(u + j + 1))};
    const float64x2_t a2 = vld1q_f64(a_data);
    const float64x2_t a4 = vmulq_f64(a2, a2);
    s2 = vaddq_f64(s2, a2);
    s4 = vaddq_f64(s4, a4);
    s6 = vaddq_f64(s6, vmulq_f64(a4, a2));
    mx = vmaxq_f64(mx, a2);
  }
  PowerSums out{vaddvq_f64(s2), vaddvq_f64(s4), vaddvq_f64(s6), vmaxvq_f64(mx)};
  for (; j < n; ++j) {
    const double a2 = abs2(load1(u + j));
    out.sum2 += a2;
    out.sum4 += a2 * a2;
    out.sum6 += a2 * a2 * a2;
    out.max2 = std::max(out.max2, a2);
  }
  return out;
}

double weighted_abs2_neon(const cplx* u, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const double a_data[2] = {abs2(load1(u + j)), abs2(load1(u + j + 1))};
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(w + j), vld1q_f64(a_data)));
  }
  double out = vaddvq_f64(acc);
  for (; j < n; ++j) out += w[j] * abs2(load1(u + j));
  return out;
}

double weighted_abs4_neon(const cplx* u, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const double a_data[2] = {abs2(load1(u + j)), abs2(load1(u + j + 1))};
    const float64x2_t a2 = vld1q_f64(a_data);
    acc = vaddq_f64(acc, vmulq_f64(vmulq_f64(vld1q_f64(w + j), a2), a2));
  }
  double out = vaddvq_f64(acc);
  for (; j < n; ++j) {
    const double a2 = abs2(load1(u + j));
    out += w[j] * a2 * a2;
  }
  return out;
}

void running_max_abs_neon(double* m, const cplx* u, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const double a_data[2] = {abs2(load1(u + j)), abs2(load1(u + j + 1))};
    const float64x2_t a = vsqrtq_f64(vld1q_f64(a_data));
    vst1q_f64(m + j, vmaxq_f64(vld1q_f64(m + j), a));
  }
  for (; j < n; ++j) m[j] = std::max(m[j], std::sqrt(abs2(load1(u + j))));
}

constexpr KernelTable kNeon{
    Backend::neon,    mul_complex_neon,   mul_real_neon,      phase_angles_neon,
    power_sums_neon,  weighted_abs2_neon, weighted_abs4_neon, running_max_abs_neon,
};

}  // namespace

const KernelTable* neon_table() noexcept { return &kNeon; }

}  // namespace fnls::kernels::detail

#else

namespace fnls::kernels::detail {
const KernelTable* neon_table() noexcept { return nullptr; }
}  // namespace fnls::kernels::detail

#endif
