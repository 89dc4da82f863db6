#include "fnls/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "fnls/error.hpp"

namespace fnls {
namespace {

void check_samples(std::span<const EpsilonSample> samples) {
  if (samples.size() < 3) {
    throw DomainError("exponent fit needs at least 3 points, got " + std::to_string(samples.size()));
  }
  std::set<double> seen;
  for (const auto& s : samples) {
    if (!seen.insert(s.epsilon).second) throw DomainError("epsilon values must be distinct");
    if (!std::isfinite(s.value) || s.value < 0.0) {
      throw DomainError("exponent fit needs finite nonnegative values");
    }
  }
}

ExponentFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("exponent fit abscissae are degenerate");
  ExponentFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.exponent * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  fit.points = x.size();
  return fit;
}

template <class Abscissa>
ExponentFit fit_dropping_zeros(std::span<const EpsilonSample> samples, Abscissa&& abscissa) {
  check_samples(samples);
  std::vector<double> x, y;
  for (const auto& s : samples) {
    if (s.value <= kNumericalZero) continue;
    x.push_back(abscissa(s.epsilon));
    y.push_back(std::log(s.value));
  }
  if (x.empty()) {
    ExponentFit fit;
    fit.exponent = std::numeric_limits<double>::infinity();
    return fit;
  }
  if (x.size() < 3) {
    throw DomainError("exponent fit has only " + std::to_string(x.size()) + " nonzero values");
  }
  return least_squares(x, y);
}

}  // namespace

ExponentFit fit_moderateness(std::span<const EpsilonSample> samples, const ScalingLaw& law) {
  check_samples(samples);
  std::vector<double> x, y;
  for (const auto& s : samples) {
    if (!(s.value > 0.0)) throw DomainError("moderateness fit needs strictly positive norms");
    x.push_back(-std::log(law.omega(s.epsilon)));
    y.push_back(std::log(s.value));
  }
  return least_squares(x, y);
}

ExponentFit fit_negligibility(std::span<const EpsilonSample> samples) {
  return fit_dropping_zeros(samples, [](double eps) {
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
    return std::log(eps);
  });
}

ExponentFit fit_decay(std::span<const EpsilonSample> samples, const ScalingLaw& law) {
  return fit_dropping_zeros(samples, [&](double eps) { return std::log(law.omega(eps)); });
}

}  // namespace fnls
