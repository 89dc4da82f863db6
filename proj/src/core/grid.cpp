#include "fnls/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fnls/error.hpp"

namespace fnls {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

Grid::Grid(double length, std::size_t n) : length_(length), n_(n) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid length must be positive and finite");
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw DomainError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  dx_ = length / static_cast<double>(n);

  std::vector<double> x(n);
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / length;
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = static_cast<double>(j) * dx_;
    k[j] = dk * static_cast<double>(signed_index(j));
  }
  positions_ = std::make_shared<const std::vector<double>>(std::move(x));
  wavenumbers_ = std::make_shared<const std::vector<double>>(std::move(k));
}

Grid Grid::with_wavenumbers(double length, std::vector<double> wavenumbers) {
  Grid g(length, wavenumbers.size());
  g.wavenumbers_ = std::make_shared<const std::vector<double>>(std::move(wavenumbers));
  return g;
}

std::size_t Grid::nearest_index(double x) const noexcept {
  double wrapped = std::fmod(x, length_);
  if (wrapped < 0.0) wrapped += length_;
  auto j = static_cast<std::size_t>(std::llround(wrapped / dx_));
  return j % n_;
}

ComplexField::ComplexField(Grid grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw StructuralError("field has " + std::to_string(values_.size()) +
                          " samples but grid has " + std::to_string(grid_.size()));
  }
}

ComplexField::ComplexField(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

}  // namespace fnls
