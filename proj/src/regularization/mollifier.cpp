#include "fnls/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fnls/error.hpp"
#include "periodic_sampling.hpp"

namespace fnls {
namespace {

double unnormalized_bump(double x) noexcept {
  const double d = x * x - 1.0;
  return d < 0.0 ? std::exp(1.0 / d) : 0.0;
}

}  // namespace

double Mollifier::bump_integral() {
  static const double value = [] {
    std::size_t intervals = 16;
    double previous = 0.0;
    for (int level = 0; level < 24; ++level) {
      const double h = 2.0 / static_cast<double>(intervals);
      double sum = 0.0;
      for (std::size_t i = 1; i < intervals; ++i) {
        sum += unnormalized_bump(-1.0 + h * static_cast<double>(i));
      }
      const double estimate = sum * h;
      if (level > 0 && std::abs(estimate - previous) <= 1e-15 * estimate) return estimate;
      previous = estimate;
      intervals *= 2;
    }
    return previous;
  }();
  return value;
}

Mollifier::Mollifier() : c_(1.0 / bump_integral()) {}

double Mollifier::operator()(double x) const noexcept { return c_ * unnormalized_bump(x); }

double Mollifier::peak() const noexcept { return c_ * std::exp(-1.0); }

ScalingLaw ScalingLaw::logarithmic(double n0) {
  if (!(n0 > 0.0) || !std::isfinite(n0)) {
    throw DomainError("logarithmic scaling law needs N0 > 0");
  }
  return ScalingLaw(Kind::log, n0);
}

void ScalingLaw::check_epsilon(double eps) const {
  const bool ok = kind_ == Kind::power ? (eps > 0.0 && eps <= 1.0) : (eps > 0.0 && eps < 1.0);
  if (!ok) {
    std::ostringstream msg;
    msg << "epsilon " << eps << " outside "
        << (kind_ == Kind::power ? "(0, 1] for the power law" : "(0, 1) for the log law");
    throw DomainError(msg.str());
  }
}

double ScalingLaw::omega(double eps) const {
  check_epsilon(eps);
  if (kind_ == Kind::power) return eps;
  return std::pow(std::log(1.0 / eps), -1.0 / n0_);
}

std::string ScalingLaw::describe() const {
  if (kind_ == Kind::power) return "power";
  std::ostringstream out;
  out << "log(N0=" << n0_ << ")";
  return out.str();
}

double GridCoefficient::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool under_resolved(double omega, const Grid& grid) noexcept { return omega < 4.0 * grid.dx(); }

GridCoefficient scaled_mollifier(const Mollifier& m, double eps, const ScalingLaw& law,
                                 const Grid& grid, double center) {
  const double omega = law.omega(eps);
  GridCoefficient out{grid, detail::unit_mass_samples(m, omega, grid, center), "mollifier", eps, omega, {}};
  if (under_resolved(omega, grid)) out.warnings.push_back(detail::under_resolution_message(eps, omega, grid));
  if (out.sup_norm() == 0.0) out.warnings.push_back(detail::empty_support_message(eps, omega));
  return out;
}

double discrete_integral(const std::vector<double>& values, double dx) noexcept {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * dx;
}

}  // namespace fnls
