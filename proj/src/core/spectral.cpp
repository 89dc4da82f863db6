#include "fnls/spectral.hpp"

#include <cmath>
#include <string>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"
#include "fnls/kernels.hpp"

namespace fnls {

FractionalOrder::FractionalOrder(double s_value) : s(s_value) {
  if (!(s_value > 0.0) || !std::isfinite(s_value)) {
    throw DomainError("fractional order s must be positive, got " + std::to_string(s_value));
  }
}

FractionalOrder FractionalOrder::for_experiments(double s_value) {
  FractionalOrder order(s_value);
  if (!(2.0 * order.s > static_cast<double>(order.d))) {
    throw DomainError("experiments require s > d/2 = 0.5, got s = " + std::to_string(s_value));
  }
  return order;
}

std::vector<cplx> transform(const ComplexField& f) {
  const Fft fft(f.grid().size());
  std::vector<cplx> out(f.size());
  fft.forward(f.values(), out);
  return out;
}

ComplexField inverse_transform(const Grid& grid, std::span<const cplx> spectrum) {
  if (spectrum.size() != grid.size()) {
    throw StructuralError("spectrum length does not match grid");
  }
  ComplexField out(grid);
  Fft(grid.size()).inverse(spectrum, out.values());
  return out;
}

std::vector<double> symbol(const Grid& grid, double exponent) {
  const auto k = grid.wavenumbers();
  std::vector<double> out(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double ak = std::abs(k[j]);
    out[j] = ak == 0.0 ? 0.0 : std::pow(ak, exponent);
  }
  return out;
}

ComplexField apply_symbol(const ComplexField& f, double exponent) {
  if (!(exponent > 0.0)) {
    throw DomainError("symbol exponent must be positive");
  }
  const Fft fft(f.grid().size());
  std::vector<cplx> spec(f.size());
  fft.forward_raw(f.values(), spec);
  auto w = symbol(f.grid(), exponent);
  const double inv_n = 1.0 / static_cast<double>(f.size());
  for (auto& x : w) x *= inv_n;
  kernels::mul_real(spec, w);
  ComplexField out(f.grid());
  fft.inverse_raw(spec, out.values());
  return out;
}

ComplexField fractional_laplacian(const ComplexField& f, const FractionalOrder& order) {
  return apply_symbol(f, 2.0 * order.s);
}

ComplexField half_laplacian(const ComplexField& f, const FractionalOrder& order) {
  return apply_symbol(f, order.s);
}

double lp_norm(const ComplexField& f, double p) {
  const double dx = f.grid().dx();
  const auto sums = kernels::power_sums(f.values());
  if (p == 2.0) return std::sqrt(sums.sum2 * dx);
  if (p == 4.0) return std::pow(sums.sum4 * dx, 0.25);
  if (p == 6.0) return std::pow(sums.sum6 * dx, 1.0 / 6.0);
  if (p == kInfinity) return std::sqrt(sums.max2);
  throw DomainError("lp_norm supports p in {2, 4, 6, inf}, got " + std::to_string(p));
}

double lp_norm_general(const ComplexField& f, double p) {
  if (p == kInfinity) return lp_norm(f, p);
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("Lebesgue exponent must be >= 1, got " + std::to_string(p));
  }
  double acc = 0.0;
  for (const auto& z : f.values()) acc += std::pow(std::abs(z), p);
  return std::pow(acc * f.grid().dx(), 1.0 / p);
}

double kinetic_energy(const ComplexField& f, const FractionalOrder& order) {
  const auto spec = transform(f);
  const auto w = symbol(f.grid(), 2.0 * order.s);
  return kernels::weighted_abs2(spec, w) * f.grid().dx();
}

double hs_norm(const ComplexField& f, const FractionalOrder& order) {
  const auto spec = transform(f);
  auto w = symbol(f.grid(), 2.0 * order.s);
  for (auto& x : w) x += 1.0;
  return std::sqrt(kernels::weighted_abs2(spec, w) * f.grid().dx());
}

}  // namespace fnls
