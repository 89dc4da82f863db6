#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fnls {

using cplx = std::complex<double>;

/// Periodic uniform grid on [0, L) with n points, n a power of two >= 8.
///
/// Wavenumbers are stored in FFT order: index j carries k_j = 2*pi*jt/L with
/// jt = j for j < n/2 and jt = j - n otherwise, so the Nyquist entry is
/// -pi*n/L. Copies share the coordinate tables.
class Grid {
 public:
  Grid(double length, std::size_t n);

  /// Grid with an externally supplied wavenumber table. Only the length of
  /// the table is validated; used for fault injection in self checks.
  static Grid with_wavenumbers(double length, std::vector<double> wavenumbers);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t j) const noexcept { return static_cast<double>(j) * dx_; }

  std::span<const double> positions() const noexcept { return *positions_; }
  std::span<const double> wavenumbers() const noexcept { return *wavenumbers_; }

  /// Signed frequency index jt of storage index j.
  std::ptrdiff_t signed_index(std::size_t j) const noexcept {
    return j < n_ / 2 ? static_cast<std::ptrdiff_t>(j)
                      : static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(n_);
  }

  /// Storage index of the grid point nearest to x (periodically wrapped).
  std::size_t nearest_index(double x) const noexcept;

  /// Same length and point count. Wavenumber tables are not compared.
  bool same_layout(const Grid& other) const noexcept {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  Grid() = default;

  double length_ = 0.0;
  std::size_t n_ = 0;
  double dx_ = 0.0;
  std::shared_ptr<const std::vector<double>> positions_;
  std::shared_ptr<const std::vector<double>> wavenumbers_;
};

bool is_power_of_two(std::size_t n) noexcept;

/// Grid samples of a complex function together with the grid they live on.
class ComplexField {
 public:
  ComplexField(Grid grid, std::vector<cplx> values);
  explicit ComplexField(Grid grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const cplx& operator[](std::size_t j) const noexcept { return values_[j]; }
  cplx& operator[](std::size_t j) noexcept { return values_[j]; }

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

}  // namespace fnls
