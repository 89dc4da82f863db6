#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fnls/coefficient.hpp"
#include "fnls/error.hpp"
#include "fnls/fit.hpp"
#include "fnls/mollifier.hpp"
#include "support/oracles.hpp"

using namespace fnls;

namespace {

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::vector<EpsilonSample> samples(const std::vector<double>& eps, auto&& f) {
  std::vector<EpsilonSample> out;
  for (double e : eps) out.push_back({e, f(e)});
  return out;
}

}  // namespace

TEST_CASE("mollifier profile") {
  const Mollifier m;
  CHECK(m(1.0) == 0.0);
  CHECK(m(-1.0) == 0.0);
  CHECK(m(1.5) == 0.0);
  CHECK(m(0.999999) >= 0.0);
  CHECK(m(0.3) == m(-0.3));
  CHECK(m(0.9) == m(-0.9));
  CHECK(m(0.0) == doctest::Approx(m.normalization() * std::exp(-1.0)).epsilon(1e-15));
  CHECK(m.peak() == m(0.0));
  // Reported normalization constant.
  CHECK(std::abs(m.normalization() - 2.2523) <= 1e-3);
}

TEST_CASE("mollifier integrates to one against an independent quadrature") {
  const Mollifier m;
  const double integral = oracle::romberg([&](double x) { return m(x); }, -1.0, 1.0, 20, 1e-15);
  CHECK(std::abs(integral - 1.0) <= 1e-10);
  const double bump = oracle::romberg(
      [](double x) { return std::abs(x) < 1.0 ? std::exp(1.0 / (x * x - 1.0)) : 0.0; }, -1.0, 1.0, 20, 1e-15);
  CHECK(std::abs(Mollifier::bump_integral() - bump) <= 1e-12);
}

TEST_CASE("scaling laws") {
  const auto power = ScalingLaw::power();
  CHECK(power.omega(0.3) == 0.3);
  CHECK(power.omega(1.0) == 1.0);
  CHECK_THROWS_AS(power.omega(0.0), DomainError);
  CHECK_THROWS_AS(power.omega(1.2), DomainError);

  const auto log2 = ScalingLaw::logarithmic(2.0);
  CHECK(log2.omega(0.01) == doctest::Approx(std::pow(std::log(100.0), -0.5)));
  CHECK_THROWS_AS(log2.omega(1.0), DomainError);
  CHECK_THROWS_AS(ScalingLaw::logarithmic(0.0), DomainError);
  // omega decreases toward zero as eps -> 0
  CHECK(log2.omega(1e-8) < log2.omega(1e-4));
  CHECK(log2.omega(1e-4) < log2.omega(0.1));
}

TEST_CASE("scaled mollifier") {
  const Mollifier m;
  const auto law = ScalingLaw::power();

  SUBCASE("peak follows the scaling identity up to the quadrature defect") {
    const Grid g(10.0, 1024);
    for (double eps : {0.8, 0.3, 0.1}) {
      CAPTURE(eps);
      const auto p = scaled_mollifier(m, eps, law, g);
      // Raw trapezoid mass of the analytic samples.
      double raw = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) raw += m(std::remainder(g.x(j), 10.0) / eps) / eps;
      raw *= g.dx();
      CHECK(p.values[0] * raw == doctest::Approx(m(0.0) / eps).epsilon(1e-14));
      CHECK(p.values[0] == doctest::Approx(m(0.0) / eps).epsilon(1e-4));
      CHECK(max_of(p.values) == p.values[0]);
    }
  }
  SUBCASE("unit mass at eps = 0.5 on n = 4096") {
    const Grid g(10.0, 4096);
    const auto p = scaled_mollifier(m, 0.5, law, g);
    CHECK(std::abs(discrete_integral(p.values, g.dx()) - 1.0) <= 1e-8);
    CHECK(p.warnings.empty());
  }
  SUBCASE("unit mass for every resolved eps, including wrapped supports") {
    for (std::size_t n : {256u, 2048u, 4096u}) {
      const Grid g(10.0, n);
      for (double eps : {1.0, 0.7, 0.5, 0.3, 0.1, 0.05, 0.02, 0.01, 0.005}) {
        if (under_resolved(eps, g)) continue;
        CAPTURE(n);
        CAPTURE(eps);
        for (double center : {0.0, 9.7, 3.14159}) {
          const auto p = scaled_mollifier(m, eps, law, g, center);
          CHECK(std::abs(discrete_integral(p.values, g.dx()) - 1.0) <= 1e-8);
        }
      }
    }
    // log law with omega larger than half the box still integrates to one
    const Grid g(10.0, 2048);
    const auto wide = scaled_mollifier(m, 0.9, ScalingLaw::logarithmic(0.5), g, 3.0);
    CHECK(wide.omega > 5.0);
    CHECK(std::abs(discrete_integral(wide.values, g.dx()) - 1.0) <= 1e-8);
  }
  SUBCASE("raw sample defect shrinks with points per support") {
    const Grid g(10.0, 2048);
    double previous = 0.0;
    for (double eps : {0.02, 0.05, 0.1, 0.3}) {
      double raw = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) raw += m(std::remainder(g.x(j) - 9.7, 10.0) / eps) / eps;
      const double defect = std::abs(raw * g.dx() - 1.0);
      if (previous > 0.0) CHECK(defect < previous);
      previous = defect;
    }
    CHECK(previous <= 1e-8);
  }
  SUBCASE("support without grid points warns") {
    const Grid g(10.0, 256);
    const auto p = scaled_mollifier(m, 0.001, law, g, 0.5 * g.dx());
    CHECK(p.sup_norm() == 0.0);
    CHECK(p.warnings.size() == 2);
  }
  SUBCASE("under-resolved eps carries a warning") {
    const Grid g(10.0, 256);
    const auto p = scaled_mollifier(m, 0.01, law, g);
    REQUIRE(p.warnings.size() == 1);
    CHECK(p.warnings[0].find("under-resolved") != std::string::npos);
  }
  SUBCASE("eps outside the admissible range") {
    const Grid g(10.0, 256);
    CHECK_THROWS_AS(scaled_mollifier(m, 0.0, law, g), DomainError);
    CHECK_THROWS_AS(scaled_mollifier(m, 1.5, law, g), DomainError);
  }
}

TEST_CASE("regularize coefficient specs") {
  const Mollifier m;
  const auto law = ScalingLaw::power();

  SUBCASE("constants are reproduced exactly") {
    const Grid g(10.0, 256);
    for (double eps : {1.0, 0.3, 0.001}) {
      const auto c = regularize(CoefficientSpec::constant(1.0), eps, law, g);
      for (double v : c.values) CHECK(v == 1.0);
      CHECK(c.warnings.empty());
    }
  }
  SUBCASE("delta peak sits on the support point") {
    const Grid g(9.0, 1024);  // x = 4.5 is grid index 512
    for (double eps : {0.5, 0.1}) {
      const auto c = regularize(CoefficientSpec({Delta{4.5, 1.0}}), eps, law, g);
      const auto it = std::max_element(c.values.begin(), c.values.end());
      CHECK(static_cast<std::size_t>(it - c.values.begin()) == 512);
      CHECK(*it == doctest::Approx(m.peak() / eps).epsilon(1e-4));
      CHECK(std::abs(discrete_integral(c.values, g.dx()) - 1.0) <= 1e-12);
    }
  }
  SUBCASE("delta power follows omega^{-k} psi^k") {
    const Grid g(9.0, 1024);
    for (double eps : {0.5, 0.2}) {
      const auto c = regularize(CoefficientSpec({DeltaPower{4.5, 2, 1.0}}), eps, law, g);
      // delta^2 * psi_eps(x) = eps^{-2} psi^2(x / eps) at x = 0
      const double expected = std::pow(eps, -2.0) * m.peak() * m.peak();
      CHECK(c.sup_norm() == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  SUBCASE("terms add") {
    const Grid g(10.0, 512);
    const auto both = regularize(CoefficientSpec({Constant{1.0}, Delta{4.5, 2.0}}), 0.3, law, g);
    const auto delta = regularize(CoefficientSpec({Delta{4.5, 2.0}}), 0.3, law, g);
    for (std::size_t j = 0; j < 512; ++j) CHECK(both.values[j] == doctest::Approx(1.0 + delta.values[j]));
  }
  SUBCASE("smooth profiles are convolved") {
    const Grid g(10.0, 1024);
    const auto p = SmoothProfile::sin2(1.0, 1.0, 1.0, 10.0);
    const auto c = regularize(CoefficientSpec({p}), 0.2, law, g);
    const auto kernel = scaled_mollifier(m, 0.2, law, g);
    for (std::size_t j : {0u, 100u, 517u}) {
      // Discrete periodic convolution, summed directly.
      double discrete = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        discrete += p(g.x((j + g.size() - i) % g.size())) * kernel.values[i] * g.dx();
      }
      CHECK(std::abs(discrete_integral(kernel.values, g.dx()) - 1.0) <= 1e-14);
      CHECK(c.values[j] == doctest::Approx(discrete).epsilon(1e-12));
      // Continuous convolution, up to the quadrature error of 41 points per support.
      const double x = g.x(j);
      const double direct = oracle::romberg(
          [&](double y) { return p(x - y) * m(y / 0.2) / 0.2; }, -0.2, 0.2, 20, 1e-14);
      CHECK(c.values[j] == doctest::Approx(direct).epsilon(1e-4));
    }
  }
  SUBCASE("invalid specs") {
    const Grid g(10.0, 256);
    CHECK_THROWS_AS(regularize(CoefficientSpec({Constant{-1.0}}), 0.5, law, g), DomainError);
    CHECK_THROWS_AS(regularize(CoefficientSpec({Delta{10.0, 1.0}}), 0.5, law, g), DomainError);
    CHECK_THROWS_AS(regularize(CoefficientSpec({Delta{4.0, -1.0}}), 0.5, law, g), DomainError);
    CHECK_THROWS_AS(regularize(CoefficientSpec({DeltaPower{4.0, 1, 1.0}}), 0.5, law, g), DomainError);
    CHECK_THROWS_AS(regularize(CoefficientSpec::constant(1.0), 0.0, law, g), DomainError);
    const auto negative = SmoothProfile::custom("neg", [](double x) { return x - 5.0; });
    CHECK_THROWS_AS(regularize(CoefficientSpec({negative}), 0.5, law, g), DomainError);
  }
  SUBCASE("classical sampling refuses singular specs") {
    const Grid g(10.0, 256);
    CHECK_THROWS_AS(sample_classical(CoefficientSpec({Delta{4.5, 1.0}}), g), DomainError);
    const auto c = sample_classical(CoefficientSpec({Constant{2.0}}), g);
    CHECK(c.values[17] == 2.0);
  }
}

TEST_CASE("regularized coefficients are nonnegative") {
  const Grid g(10.0, 512);
  const CoefficientSpec spec({Constant{0.0}, Delta{1.0, 0.5}, DeltaPower{7.25, 3, 2.0},
                              SmoothProfile::gaussian(1.0, 5.0, 0.3, 10.0),
                              SmoothProfile::sin2(0.0, 2.0, 3.0, 10.0)});
  for (double eps : {1.0, 0.5, 0.1, 0.03, 0.005}) {
    const auto c = regularize(spec, eps, ScalingLaw::power(), g);
    for (double v : c.values) CHECK(v >= 0.0);
  }
}

TEST_CASE("delta regularization is translation equivariant") {
  const Grid g(10.0, 2048);
  const auto law = ScalingLaw::power();
  const double eps = 0.2;
  const auto base = regularize(CoefficientSpec({Delta{3.0, 1.0}}), eps, law, g);

  // Whole-cell shift: exact up to roundoff.
  const std::size_t shift = 37;
  const auto moved = regularize(CoefficientSpec({Delta{3.0 + shift * g.dx(), 1.0}}), eps, law, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(moved.values[(j + shift) % g.size()] - base.values[j]) <= 1e-11);
  }

  // Sub-cell shift: resampling error at most sup|psi_eps'| dx.
  const double dshift = 37.4 * g.dx();
  const auto sub = regularize(CoefficientSpec({Delta{3.0 + dshift, 1.0}}), eps, law, g);
  double slope = 0.0;
  for (std::size_t j = 1; j < g.size(); ++j) {
    slope = std::max(slope, std::abs(base.values[j] - base.values[j - 1]) / g.dx());
  }
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    err = std::max(err, std::abs(sub.values[(j + shift) % g.size()] - base.values[j]));
  }
  CHECK(err <= 1.0 * slope * g.dx());
}

TEST_CASE("mollification is an approximate identity of second order") {
  const Grid g(10.0, 4096);
  const auto law = ScalingLaw::power();
  const auto p = SmoothProfile::sin2(1.0, 1.0, 1.0, 10.0);
  const auto exact = sample_classical(CoefficientSpec({p}), g);
  std::vector<EpsilonSample> errs;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const auto c = regularize(CoefficientSpec({p}), eps, law, g);
    double e = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) e = std::max(e, std::abs(c.values[j] - exact.values[j]));
    errs.push_back({eps, e});
  }
  const auto fit = fit_decay(errs, law);
  CHECK(fit.exponent >= 1.9);
}

TEST_CASE("moderateness fit") {
  const auto law = ScalingLaw::power();
  const std::vector<double> net = {0.5, 0.25, 0.1, 0.05, 0.01};

  SUBCASE("exact power law") {
    const auto fit = fit_moderateness(samples(net, [](double e) { return std::pow(e, -2.0); }), law);
    CHECK(std::abs(fit.exponent - 2.0) <= 1e-10);
    CHECK(fit.residual <= 1e-10);
  }
  SUBCASE("constant norms") {
    const auto fit = fit_moderateness(samples(net, [](double) { return 3.7; }), law);
    CHECK(std::abs(fit.exponent) <= 1e-10);
  }
  SUBCASE("regularized delta sup norms scale like omega^{-1}") {
    const Grid g(10.0, 4096);
    const auto fit = fit_moderateness(samples({0.4, 0.2, 0.1, 0.05}, [&](double e) {
      return regularize(CoefficientSpec({Delta{4.5, 1.0}}), e, law, g).sup_norm();
    }), law);
    CHECK(std::abs(fit.exponent - 1.0) <= 0.05);
  }
  SUBCASE("log scaling law") {
    const auto log_law = ScalingLaw::logarithmic(1.5);
    const auto fit = fit_moderateness(
        samples(net, [&](double e) { return 4.0 * std::pow(log_law.omega(e), -3.0); }), log_law);
    CHECK(std::abs(fit.exponent - 3.0) <= 1e-10);
  }
  SUBCASE("invariant under rescaling of the norms") {
    auto f = [](double e) { return std::pow(e, -1.3) * (1.0 + 0.2 * std::sin(10.0 * e)); };
    const auto a = fit_moderateness(samples(net, f), law);
    const auto b = fit_moderateness(samples(net, [&](double e) { return 17.0 * f(e); }), law);
    CHECK(a.exponent == doctest::Approx(b.exponent).epsilon(1e-12));
    CHECK(a.residual == doctest::Approx(b.residual).epsilon(1e-9));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_moderateness(samples({0.5, 0.1}, [](double) { return 1.0; }), law), DomainError);
    CHECK_THROWS_AS(fit_moderateness(samples({0.5, 0.1, 0.05}, [](double e) { return e - 0.1; }), law),
                    DomainError);
    CHECK_THROWS_AS(fit_moderateness(samples({0.5, 0.5, 0.05}, [](double) { return 1.0; }), law),
                    DomainError);
  }
}

TEST_CASE("negligibility fit") {
  const std::vector<double> net = {0.5, 0.25, 0.1, 0.05, 0.01};
  SUBCASE("eps^5") {
    const auto fit = fit_negligibility(samples(net, [](double e) { return std::pow(e, 5.0); }));
    CHECK(std::abs(fit.exponent - 5.0) <= 1e-10);
  }
  SUBCASE("numerically zero norms give the infinite sentinel") {
    const auto fit = fit_negligibility(samples(net, [](double) { return 1e-310; }));
    CHECK(fit.is_infinite());
    const auto zero = fit_negligibility(samples(net, [](double) { return 0.0; }));
    CHECK(zero.is_infinite());
  }
  SUBCASE("perturbed power law") {
    std::vector<double> geometric;
    for (int i = 0; i < 10; ++i) geometric.push_back(0.5 * std::pow(0.7, i));
    const auto fit = fit_negligibility(
        samples(geometric, [](double e) { return e * e * (1.0 + 0.01 * std::sin(1.0 / e)); }));
    CHECK(std::abs(fit.exponent - 2.0) <= 0.1);
  }
  SUBCASE("scale invariance") {
    auto f = [](double e) { return std::pow(e, 2.5) * (2.0 + std::cos(7.0 * e)); };
    const auto a = fit_negligibility(samples(net, f));
    const auto b = fit_negligibility(samples(net, [&](double e) { return 1e-6 * f(e); }));
    CHECK(a.exponent == doctest::Approx(b.exponent).epsilon(1e-12));
  }
  SUBCASE("too few nonzero values") {
    CHECK_THROWS_AS(fit_negligibility(samples(net, [](double e) { return e > 0.2 ? e : 0.0; })), DomainError);
  }
}
