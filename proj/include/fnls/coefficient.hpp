#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fnls/grid.hpp"
#include "fnls/mollifier.hpp"

namespace fnls {

/// Nonnegative constant a.
struct Constant {
  double value = 0.0;
};

/// Smooth nonnegative profile. Named kinds keep their parameters so that a
/// spec can be written back to a config file; custom profiles carry only a
/// label.
struct SmoothProfile {
  std::string kind;
  std::map<std::string, double> params;
  std::function<double(double)> eval;

  double operator()(double x) const { return eval(x); }

  /// offset + amplitude * sin^2(2 pi waves x / length)
  static SmoothProfile sin2(double offset, double amplitude, double waves, double length);
  /// amplitude * exp(-(x - center)^2 / (2 width^2)) on the nearest periodic image
  static SmoothProfile gaussian(double amplitude, double center, double width, double length);
  static SmoothProfile custom(std::string label, std::function<double(double)> f);
};

/// strength * delta(x - x0)
struct Delta {
  double x0 = 0.0;
  double strength = 1.0;
};

/// strength * delta^k(x - x0), represented through delta^k * psi_eps =
/// omega^{-k} psi^k(x / omega).
struct DeltaPower {
  double x0 = 0.0;
  int k = 2;
  double strength = 1.0;
};

using CoefficientTerm = std::variant<Constant, SmoothProfile, Delta, DeltaPower>;

/// Sum of terms describing a possibly distributional coefficient.
class CoefficientSpec {
 public:
  CoefficientSpec() = default;
  explicit CoefficientSpec(std::vector<CoefficientTerm> terms);

  static CoefficientSpec constant(double a) { return CoefficientSpec({Constant{a}}); }

  CoefficientSpec& add(CoefficientTerm term);

  const std::vector<CoefficientTerm>& terms() const noexcept { return terms_; }

  /// Contains a Delta or DeltaPower term.
  bool is_singular() const noexcept;
  /// Only Constant terms (or none).
  bool is_constant() const noexcept;

  std::string describe() const;

 private:
  std::vector<CoefficientTerm> terms_;
};

/// Checks strengths and delta locations against the grid; throws DomainError.
void validate(const CoefficientSpec& spec, const Grid& grid);

/// Mollified coefficient on the grid:
///   Constant(a)        -> a exactly
///   SmoothProfile f    -> f * psi_eps via spectral convolution, unit-mass kernel
///   Delta(x0, a)       -> a psi_eps(x - x0), evaluated pointwise, unit discrete mass
///   DeltaPower(x0,k,a) -> a omega^{-k} psi((x - x0)/omega)^k
/// Terms are summed; periodic wrapping throughout.
GridCoefficient regularize(const CoefficientSpec& spec, double eps, const ScalingLaw& law,
                           const Grid& grid, const Mollifier& mollifier = Mollifier());

/// Direct samples of a regular spec (no mollification). Throws DomainError
/// when the spec has singular terms.
GridCoefficient sample_classical(const CoefficientSpec& spec, const Grid& grid);

/// Periodic convolution of real samples with psi_eps, computed spectrally.
std::vector<double> mollify_samples(const std::vector<double>& samples, double omega,
                                    const Grid& grid, const Mollifier& mollifier = Mollifier());

}  // namespace fnls
