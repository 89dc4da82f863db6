#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include "fnls/mollifier.hpp"

namespace fnls {

/// Norms at or below this are treated as exact zeros by the fitters.
inline constexpr double kNumericalZero = 1e-300;

struct EpsilonSample {
  double epsilon;
  double value;
};

/// Least-squares slope of log(value) against a log-scale abscissa.
struct ExponentFit {
  double exponent = 0.0;
  double intercept = 0.0;
  /// RMS of the log-residuals.
  double residual = 0.0;
  std::size_t points = 0;

  bool is_infinite() const noexcept { return exponent == std::numeric_limits<double>::infinity(); }
};

/// Fits value ~ C omega(eps)^{-N}: slope of log(value) against -log(omega).
/// Needs >= 3 distinct eps and strictly positive values.
ExponentFit fit_moderateness(std::span<const EpsilonSample> samples, const ScalingLaw& law);

/// Fits value ~ C eps^k: slope of log(value) against log(eps).
/// Values <= kNumericalZero are dropped; if none remain the result is the
/// +inf sentinel. Fewer than 3 remaining points is a DomainError.
ExponentFit fit_negligibility(std::span<const EpsilonSample> samples);

/// Fits value ~ C omega^p: slope of log(value) against log(omega(eps)).
/// Zero handling as in fit_negligibility.
ExponentFit fit_decay(std::span<const EpsilonSample> samples, const ScalingLaw& law);

}  // namespace fnls
