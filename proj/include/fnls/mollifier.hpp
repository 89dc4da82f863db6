#pragma once

#include <string>
#include <vector>

#include "fnls/grid.hpp"

namespace fnls {

/// Friedrichs mollifier psi(x) = c exp(1/(x^2 - 1)) on |x| < 1, zero outside.
/// The constant c is computed by quadrature so that psi integrates to 1.
class Mollifier {
 public:
  Mollifier();

  double operator()(double x) const noexcept;

  double normalization() const noexcept { return c_; }

  /// psi(0) = c / e.
  double peak() const noexcept;

  /// Integral of exp(1/(x^2-1)) over (-1, 1) by trapezoid doubling. The
  /// integrand is flat to all orders at the endpoints, so the rule converges
  /// faster than any power of the step.
  static double bump_integral();

 private:
  double c_;
};

/// omega(eps): power law omega = eps, or logarithmic law
/// omega = (log(1/eps))^{-1/N0}.
class ScalingLaw {
 public:
  enum class Kind { power, log };

  static ScalingLaw power() noexcept { return ScalingLaw(Kind::power, 0.0); }
  static ScalingLaw logarithmic(double n0);

  Kind kind() const noexcept { return kind_; }
  double n0() const noexcept { return n0_; }

  /// Admissible eps: (0, 1] for the power law, (0, 1) for the log law.
  void check_epsilon(double eps) const;

  double omega(double eps) const;

  std::string describe() const;

  friend bool operator==(const ScalingLaw&, const ScalingLaw&) = default;

 private:
  ScalingLaw(Kind k, double n0) : kind_(k), n0_(n0) {}

  Kind kind_;
  double n0_;
};

/// Nonnegative real samples of a (regularized) coefficient on a grid.
struct GridCoefficient {
  Grid grid;
  std::vector<double> values;
  std::string provenance;
  double epsilon = 0.0;
  double omega = 0.0;
  std::vector<std::string> warnings;

  double sup_norm() const noexcept;
};

/// True when the scaled mollifier is too narrow for the grid: omega < 4 dx.
bool under_resolved(double omega, const Grid& grid) noexcept;

/// psi_eps(x - center) = omega^{-1} psi((x - center)/omega) sampled on the
/// grid with periodic wrapping, then rescaled to unit discrete mass
/// dx * sum_j = 1. The rescaling factor is the trapezoid defect of the
/// samples, which vanishes as omega / dx grows. Carries an under-resolution
/// warning when omega < 4 dx.
GridCoefficient scaled_mollifier(const Mollifier& m, double eps, const ScalingLaw& law,
                                 const Grid& grid, double center = 0.0);

/// Rectangle-rule integral of real samples.
double discrete_integral(const std::vector<double>& values, double dx) noexcept;

}  // namespace fnls
