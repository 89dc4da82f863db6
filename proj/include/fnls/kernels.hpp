#pragma once

// Pointwise inner loops of the solver and the norm reductions.
//
// Every kernel has a scalar reference implementation. Vector variants (AVX2 on
// x86-64, NEON on aarch64) are selected once at startup from the CPU feature
// set and can be overridden with set_backend(). Variants agree with the
// scalar reference up to floating-point reassociation in the reductions.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace fnls::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;

/// Sums of |u|^2, |u|^4, |u|^6 and the maximum of |u|^2 over a sample array.
struct PowerSums {
  double sum2 = 0.0;
  double sum4 = 0.0;
  double sum6 = 0.0;
  double max2 = 0.0;
};

/// Function table implemented by each backend.
struct KernelTable {
  Backend backend;
  // u[j] *= w[j]
  void (*mul_complex)(cplx* u, const cplx* w, std::size_t n);
  // u[j] *= w[j], w real
  void (*mul_real)(cplx* u, const double* w, std::size_t n);
  // theta[j] = dt * (v[j] + g[j] * |u[j]|^2)
  void (*phase_angles)(const cplx* u, const double* v, const double* g, double dt,
                       double* theta, std::size_t n);
  PowerSums (*power_sums)(const cplx* u, std::size_t n);
  // sum_j w[j] |u[j]|^2
  double (*weighted_abs2)(const cplx* u, const double* w, std::size_t n);
  // sum_j w[j] |u[j]|^4
  double (*weighted_abs4)(const cplx* u, const double* w, std::size_t n);
  // m[j] = max(m[j], |u[j]|)
  void (*running_max_abs)(double* m, const cplx* u, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// Table for a backend, or nullptr when it is not compiled in or the CPU
/// lacks the instructions.
const KernelTable* table_for(Backend b) noexcept;

bool backend_available(Backend b) noexcept;

/// Backend used by the dispatching wrappers below.
Backend active_backend() noexcept;

/// Throws DomainError if the backend is unavailable.
void set_backend(Backend b);

/// Best backend the running CPU supports.
Backend detect_backend() noexcept;

// Dispatching wrappers. Span sizes must agree; this is checked by assert.
void mul_complex(std::span<cplx> u, std::span<const cplx> w);
void mul_real(std::span<cplx> u, std::span<const double> w);
void phase_angles(std::span<const cplx> u, std::span<const double> v, std::span<const double> g,
                  double dt, std::span<double> theta);
PowerSums power_sums(std::span<const cplx> u);
double weighted_abs2(std::span<const cplx> u, std::span<const double> w);
double weighted_abs4(std::span<const cplx> u, std::span<const double> w);
void running_max_abs(std::span<double> m, std::span<const cplx> u);

/// u[j] *= exp(-i theta[j]). Uses the active backend for the multiply; the
/// sine/cosine evaluation is scalar libm on every backend so that phases are
/// identical across backends.
void rotate_phase(std::span<cplx> u, std::span<const double> theta, std::span<cplx> scratch);

}  // namespace fnls::kernels
