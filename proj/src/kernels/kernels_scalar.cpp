#include <algorithm>
#include <cmath>

#include "kernel_tables.hpp"

namespace fnls::kernels {
namespace {

void mul_complex_scalar(cplx* u, const cplx* w, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = u[j].real(), ai = u[j].imag();
    const double br = w[j].real(), bi = w[j].imag();
    u[j] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void mul_real_scalar(cplx* u, const double* w, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = cplx(u[j].real() * w[j], u[j].imag() * w[j]);
  }
}

inline double abs2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

void phase_angles_scalar(const cplx* u, const double* v, const double* g, double dt,
                         double* theta, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    theta[j] = dt * (v[j] + g[j] * abs2(u[j]));
  }
}

PowerSums power_sums_scalar(const cplx* u, std::size_t n) {
  PowerSums s;
  for (std::size_t j = 0; j < n; ++j) {
    const double a2 = abs2(u[j]);
    const double a4 = a2 * a2;
    s.sum2 += a2;
    s.sum4 += a4;
    s.sum6 += a4 * a2;
    s.max2 = std::max(s.max2, a2);
  }
  return s;
}

double weighted_abs2_scalar(const cplx* u, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += w[j] * abs2(u[j]);
  return acc;
}

double weighted_abs4_scalar(const cplx* u, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a2 = abs2(u[j]);
    acc += w[j] * a2 * a2;
  }
  return acc;
}

void running_max_abs_scalar(double* m, const cplx* u, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) m[j] = std::max(m[j], std::sqrt(abs2(u[j])));
}

constexpr KernelTable kScalar{
    Backend::scalar,      mul_complex_scalar,   mul_real_scalar,        phase_angles_scalar,
    power_sums_scalar,    weighted_abs2_scalar, weighted_abs4_scalar,   running_max_abs_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace fnls::kernels
