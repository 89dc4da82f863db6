#include <atomic>
#include <cassert>
#include <cmath>
#include <string>

#include "fnls/error.hpp"
#include "kernel_tables.hpp"

namespace fnls::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(FNLS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{table_for(detect_backend())};
  return slot;
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return &scalar_table();
    case Backend::avx2: return cpu_has_avx2() ? detail::avx2_table() : nullptr;
    case Backend::neon: return detail::neon_table();
  }
  return nullptr;
}

bool backend_available(Backend b) noexcept { return table_for(b) != nullptr; }

Backend detect_backend() noexcept {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Backend active_backend() noexcept { return active().backend; }

void set_backend(Backend b) {
  const KernelTable* t = table_for(b);
  if (t == nullptr) {
    throw DomainError("kernel backend '" + std::string(backend_name(b)) + "' is not available");
  }
  active_slot().store(t, std::memory_order_release);
}

void mul_complex(std::span<cplx> u, std::span<const cplx> w) {
  assert(u.size() == w.size());
  active().mul_complex(u.data(), w.data(), u.size());
}

void mul_real(std::span<cplx> u, std::span<const double> w) {
  assert(u.size() == w.size());
  active().mul_real(u.data(), w.data(), u.size());
}

void phase_angles(std::span<const cplx> u, std::span<const double> v, std::span<const double> g,
                  double dt, std::span<double> theta) {
  assert(u.size() == v.size() && u.size() == g.size() && u.size() == theta.size());
  active().phase_angles(u.data(), v.data(), g.data(), dt, theta.data(), u.size());
}

PowerSums power_sums(std::span<const cplx> u) { return active().power_sums(u.data(), u.size()); }

double weighted_abs2(std::span<const cplx> u, std::span<const double> w) {
  assert(u.size() == w.size());
  return active().weighted_abs2(u.data(), w.data(), u.size());
}

double weighted_abs4(std::span<const cplx> u, std::span<const double> w) {
  assert(u.size() == w.size());
  return active().weighted_abs4(u.data(), w.data(), u.size());
}

void running_max_abs(std::span<double> m, std::span<const cplx> u) {
  assert(m.size() == u.size());
  active().running_max_abs(m.data(), u.data(), u.size());
}

void rotate_phase(std::span<cplx> u, std::span<const double> theta, std::span<cplx> scratch) {
  assert(u.size() == theta.size() && u.size() == scratch.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    scratch[j] = cplx(std::cos(theta[j]), -std::sin(theta[j]));
  }
  active().mul_complex(u.data(), scratch.data(), u.size());
}

}  // namespace fnls::kernels
