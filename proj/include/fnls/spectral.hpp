#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fnls/grid.hpp"

namespace fnls {

/// Fractional power s of the Laplacian in dimension d (fixed to 1).
struct FractionalOrder {
  double s = 1.0;
  int d = 1;

  /// Any s > 0. Throws DomainError otherwise.
  explicit FractionalOrder(double s_value);

  /// Order for well-posedness experiments, which need s > d/2.
  static FractionalOrder for_experiments(double s_value);
};

// Spectral convention: the unitary DFT
//   fhat_j = n^{-1/2} sum_m f_m exp(-2 pi i j m / n),
// so sum |fhat_j|^2 = sum |f_m|^2 and every L2-type norm of a field equals
// (dx * sum_j w_j |fhat_j|^2)^{1/2} for the appropriate spectral weight w.

/// Unitary DFT of the samples. Throws StructuralError on size mismatch.
std::vector<cplx> transform(const ComplexField& f);

/// Inverse of transform().
ComplexField inverse_transform(const Grid& grid, std::span<const cplx> spectrum);

/// |k_j|^p for every wavenumber; the zero mode maps to 0 for p > 0.
std::vector<double> symbol(const Grid& grid, double exponent);

/// Field whose spectrum is that of f multiplied by |k|^exponent.
/// Throws DomainError for exponent <= 0.
ComplexField apply_symbol(const ComplexField& f, double exponent);

/// (-Delta)^s f, symbol |k|^{2s}.
ComplexField fractional_laplacian(const ComplexField& f, const FractionalOrder& order);

/// (-Delta)^{s/2} f, symbol |k|^s.
ComplexField half_laplacian(const ComplexField& f, const FractionalOrder& order);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Rectangle-rule L^p norm, p in {2, 4, 6, inf}. Throws DomainError for
/// other exponents.
double lp_norm(const ComplexField& f, double p);

/// (dx * sum |f_j|^p)^{1/p} for any finite p >= 1; used where the exponent
/// comes from a formula (Sobolev and GNS exponents).
double lp_norm_general(const ComplexField& f, double p);

/// sqrt(||f||_2^2 + ||(-Delta)^{s/2} f||_2^2), evaluated as the spectral sum
/// of (1 + |k|^{2s}) |fhat|^2.
double hs_norm(const ComplexField& f, const FractionalOrder& order);

/// ||(-Delta)^{s/2} f||_2^2 as a spectral sum.
double kinetic_energy(const ComplexField& f, const FractionalOrder& order);

}  // namespace fnls
