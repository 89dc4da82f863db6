#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fnls/grid.hpp"
#include "fnls/mollifier.hpp"

namespace fnls::detail {

// out[j] += sum over periodic images of f(x_j - center + m L), for every
// image with |x_j - center + m L| < radius.
template <class F>
void add_periodic(const Grid& grid, double center, double radius, std::vector<double>& out, F&& f) {
  const double L = grid.length();
  const auto images = static_cast<long>(std::ceil(radius / L)) + 1;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double d = std::remainder(grid.x(j) - center, L);
    double acc = 0.0;
    for (long m = -images; m <= images; ++m) {
      const double y = d + static_cast<double>(m) * L;
      if (std::abs(y) < radius) acc += f(y);
    }
    out[j] += acc;
  }
}

// psi_omega(x_j - center), periodically wrapped and rescaled so that
// dx * sum_j = 1 exactly. Returns all zeros when no grid point lies inside
// the support.
inline std::vector<double> unit_mass_samples(const Mollifier& m, double omega, const Grid& grid,
                                             double center) {
  std::vector<double> out(grid.size(), 0.0);
  add_periodic(grid, center, omega, out, [&](double y) { return m(y / omega) / omega; });
  double sum = 0.0;
  for (double v : out) sum += v;
  if (sum > 0.0) {
    const double scale = 1.0 / (sum * grid.dx());
    for (double& v : out) v *= scale;
  }
  return out;
}

inline std::string empty_support_message(double eps, double omega) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "mollifier support holds no grid point: eps=" << eps << " omega=" << omega
      << "; regularized mass is lost";
  return msg.str();
}

inline std::string under_resolution_message(double eps, double omega, const Grid& grid) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "under-resolved mollifier: eps=" << eps << " omega=" << omega << " < 4*dx=" << 4.0 * grid.dx();
  return msg.str();
}

}  // namespace fnls::detail
