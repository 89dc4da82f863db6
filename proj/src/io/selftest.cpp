#include "fnls/selftest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "fnls/coefficient.hpp"
#include "fnls/dynamics.hpp"
#include "fnls/error.hpp"
#include "fnls/experiments.hpp"
#include "fnls/fit.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

namespace {

constexpr std::size_t kEigenGridSize = 64;

std::string sci(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3e", x);
  return buf.data();
}

SelftestCheck plane_wave(const SelftestOptions& options) {
  const double L = 10.0;
  const Grid reference(L, kEigenGridSize);
  const Grid grid = options.wavenumbers
                        ? Grid::with_wavenumbers(L, *options.wavenumbers)
                        : reference;
  double worst = 0.0;
  for (double s : {0.6, 1.0, 1.5}) {
    for (int m : {1, 3, -5, 31}) {
      const double k = 2.0 * std::numbers::pi * m / L;
      ComplexField u(grid);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::polar(1.0, k * reference.x(j));
      const auto lu = fractional_laplacian(u, FractionalOrder(s));
      const double lambda = std::pow(std::abs(k), 2.0 * s);
      for (std::size_t j = 0; j < u.size(); ++j) {
        worst = std::max(worst, std::abs(lu[j] - lambda * u[j]) / lambda);
      }
    }
  }
  return {"plane_wave_eigenfunction", worst <= 1e-11, "max_rel_err=" + sci(worst) + " tol=1e-11"};
}

SelftestCheck mass_conservation() {
  const auto preset = case_preset("case4");
  const Grid grid(10.0, 256);
  const auto law = ScalingLaw::power();
  const auto V = regularize(preset.V, 0.3, law, grid);
  const auto g = regularize(preset.g, 0.3, law, grid);
  SolverConfig c;
  c.final_time = 0.1;
  c.dt = 1e-3;
  c.allow_phase_wrap = true;
  c.track_pointwise_max = false;
  const auto record = run(c, initial_bump(grid), V, g);
  const double drift = record.relative_mass_drift();
  return {"mass_conservation_100_steps", drift <= 1e-10,
          "rel_drift=" + sci(drift) + " tol=1e-10"};
}

SelftestCheck mollifier_mass() {
  const Mollifier m;
  const double c_err = std::abs(m.normalization() - 2.2523);
  const Grid grid(10.0, 1024);
  double worst = 0.0;
  for (double eps : {1.0, 0.5, 0.25, 0.1}) {
    const auto psi = scaled_mollifier(m, eps, ScalingLaw::power(), grid, 4.5);
    worst = std::max(worst, std::abs(discrete_integral(psi.values, grid.dx()) - 1.0));
  }
  return {"mollifier_mass", c_err <= 1e-3 && worst <= 1e-8,
          "c_err=" + sci(c_err) + " tol=1e-3 mass_err=" + sci(worst) + " tol=1e-8"};
}

SelftestCheck moderateness_fit() {
  double worst = 0.0;
  for (const auto& law : {ScalingLaw::power(), ScalingLaw::logarithmic(2.0)}) {
    std::vector<EpsilonSample> samples;
    for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
      samples.push_back({eps, 3.0 * std::pow(law.omega(eps), -2.0)});
    }
    worst = std::max(worst, std::abs(fit_moderateness(samples, law).exponent - 2.0));
  }
  return {"moderateness_fit_synthetic", worst <= 1e-9, "N_hat_err=" + sci(worst) + " tol=1e-9"};
}

template <class F>
SelftestCheck guarded(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  return {guarded("plane_wave_eigenfunction", [&] { return plane_wave(options); }),
          guarded("mass_conservation_100_steps", mass_conservation),
          guarded("mollifier_mass", mollifier_mass),
          guarded("moderateness_fit_synthetic", moderateness_fit)};
}

std::string format_selftest(const std::vector<SelftestCheck>& checks) {
  std::string out;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    out += (c.pass ? "PASS " : "FAIL ") + c.name + " " + c.detail + "\n";
    passed += c.pass ? 1 : 0;
  }
  out += "selftest: " + std::to_string(passed) + "/" + std::to_string(checks.size()) + " passed\n";
  return out;
}

bool all_passed(const std::vector<SelftestCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.pass; });
}

}  // namespace fnls
