#include "fnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fnls/error.hpp"
#include "fnls/kernels.hpp"

namespace fnls {
namespace {

void check_coefficients(const ComplexField& u, std::span<const double> V, std::span<const double> g) {
  if (V.size() != u.size() || g.size() != u.size()) {
    throw StructuralError("coefficient arrays do not match the field size");
  }
  auto negative = [](double x) { return !(x >= 0.0); };
  if (std::any_of(V.begin(), V.end(), negative) || std::any_of(g.begin(), g.end(), negative)) {
    throw DomainError("coefficients V and g must be nonnegative");
  }
}

double sup(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a) + std::abs(b)); }

bool is_integer(double x) { return std::isfinite(x) && near(x, std::round(x)); }

}  // namespace

BoundWitness make_witness(double lhs, double rhs, std::string label) {
  BoundWitness w{lhs, rhs, 0.0, std::move(label), false};
  if (lhs == 0.0 && rhs == 0.0) {
    w.degenerate = true;
    w.ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    w.ratio = lhs / rhs;
  }
  return w;
}

double mass(const ComplexField& u) { return lp_norm(u, 2.0); }

Hamiltonian hamiltonian(const ComplexField& u, std::span<const double> V, std::span<const double> g,
                        const FractionalOrder& order) {
  check_coefficients(u, V, g);
  const double dx = u.grid().dx();
  Hamiltonian h;
  h.kinetic = kinetic_energy(u, order);
  h.potential = kernels::weighted_abs2(u.values(), V) * dx;
  h.interaction = 0.5 * kernels::weighted_abs4(u.values(), g) * dx;
  h.total = h.kinetic + h.potential + h.interaction;
  return h;
}

WeightedNorms weighted_norms(const ComplexField& u, std::span<const double> V,
                             std::span<const double> g) {
  check_coefficients(u, V, g);
  const double dx = u.grid().dx();
  return {std::sqrt(kernels::weighted_abs2(u.values(), V) * dx),
          std::pow(kernels::weighted_abs4(u.values(), g) * dx, 0.25)};
}

BoundWitness hs_growth_witness(const ComplexField& u_t, const ComplexField& u0,
                               std::span<const double> V, std::span<const double> g,
                               const FractionalOrder& order) {
  check_coefficients(u0, V, g);
  const double lhs = hs_norm(u_t, order);
  const double l4 = lp_norm(u0, 4.0);
  const double rhs = std::sqrt(1.0 + sup(V)) * hs_norm(u0, order) + std::sqrt(sup(g)) * l4 * l4;
  return make_witness(lhs, rhs, "hs_growth");
}

BoundWitness embedding_witness(const ComplexField& u, const FractionalOrder& order) {
  return make_witness(lp_norm(u, kInfinity), hs_norm(u, order), "linf_embedding");
}

BoundWitness check_sobolev(const ComplexField& u, double s, int d) {
  if (!(s > 0.0) || !(static_cast<double>(d) > 2.0 * s)) {
    std::ostringstream msg;
    msg << "Sobolev inequality needs 0 < 2s < d; got s=" << s << " d=" << d;
    throw DomainError(msg.str());
  }
  const double q = 2.0 * d / (d - 2.0 * s);
  const double lhs = lp_norm_general(u, q);
  const double rhs = std::sqrt(kinetic_energy(u, FractionalOrder(s)));
  std::ostringstream label;
  label << "sobolev(q=" << q << ")";
  return make_witness(lhs, rhs, label.str());
}

GNSParams GNSParams::make(double r, double s1, double s2, double p1, double p2, double q,
                          double theta, int d) {
  auto fail = [](const std::string& why) { throw DomainError("inadmissible GNS tuple: " + why); };
  auto exponent_ok = [](double p) { return p >= 1.0; };  // inf passes
  if (d < 1) fail("d must be >= 1");
  if (!(0.0 <= s1 && s1 <= s2)) fail("need 0 <= s1 <= s2");
  if (!(r >= 0.0)) fail("need r >= 0");
  if (!exponent_ok(p1) || !exponent_ok(p2) || !exponent_ok(q)) fail("need 1 <= p1, p2, q <= inf");
  if (s1 == s2 && p1 == p2) fail("need (s1, p1) != (s2, p2)");
  if (!(theta > 0.0 && theta < 1.0)) fail("need theta in (0, 1)");

  GNSParams p{r, s1, s2, p1, p2, q, theta, d};
  const double mu = p.mu();
  if (!(r < mu)) fail("need r < mu = theta s1 + (1 - theta) s2");
  const double inv_q = theta / p1 + (1.0 - theta) / p2 - (mu - r) / d;
  if (!near(inv_q, 1.0 / q)) fail("1/q must equal theta/p1 + (1-theta)/p2 - (mu - r)/d");

  // Exceptional family 1.
  if (d == 1 && is_integer(s2) && s2 >= 1.0 && p1 > 1.0 && p2 == 1.0 &&
      near(s1, s2 - 1.0 + 1.0 / p1)) {
    const bool finite_p1 = std::isfinite(p1);
    const bool first = finite_p1 && near(r, s2 - 1.0);
    const bool second = s2 + theta / p1 - 1.0 < r && r < s2 + theta / p1 - theta;
    if (first || second) fail("exceptional family with d = 1, p2 = 1");
  }
  // Exceptional family 2.
  if (s1 < s2 && std::isinf(q) && near(s1 - d / p1, r) && near(s2 - d / p2, r) && is_integer(r) &&
      !(std::isinf(p1) && p2 == 1.0)) {
    fail("exceptional family with q = inf and integer r");
  }
  return p;
}

GNSParams GNSParams::l6(double s, int d) {
  if (!(3.0 * s > d)) throw DomainError("L6 GNS tuple needs d < 3s");
  return make(0.0, 0.0, s, 2.0, 2.0, 6.0, 1.0 - d / (3.0 * s), d);
}

double sobolev_scale_norm(const ComplexField& u, double sigma) {
  if (sigma == 0.0) return lp_norm(u, 2.0);
  return hs_norm(u, FractionalOrder(sigma));
}

BoundWitness check_gns(const ComplexField& u, const GNSParams& params) {
  if (params.r != 0.0 || params.p1 != 2.0 || params.p2 != 2.0) {
    throw DomainError("check_gns supports only r = 0 and p1 = p2 = 2");
  }
  const double lhs = lp_norm_general(u, params.q);
  const double rhs = std::pow(sobolev_scale_norm(u, params.s1), params.theta) *
                     std::pow(sobolev_scale_norm(u, params.s2), 1.0 - params.theta);
  std::ostringstream label;
  label << "gns(q=" << params.q << ",s2=" << params.s2 << ",theta=" << params.theta << ")";
  return make_witness(lhs, rhs, label.str());
}

ComplexField random_band_limited_field(const Grid& grid, std::size_t max_mode, std::mt19937_64& rng,
                                       bool include_zero_mode) {
  if (2 * max_mode >= grid.size()) throw DomainError("band limit exceeds the grid's Nyquist index");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> spec(grid.size(), cplx(0.0, 0.0));
  const auto m = static_cast<std::ptrdiff_t>(max_mode);
  for (std::ptrdiff_t jt = -m; jt <= m; ++jt) {
    if (jt == 0 && !include_zero_mode) continue;
    const double decay = 1.0 / (1.0 + std::abs(static_cast<double>(jt)));
    const double re = normal(rng);
    const double im = normal(rng);
    const auto j = static_cast<std::size_t>(jt < 0 ? jt + static_cast<std::ptrdiff_t>(grid.size()) : jt);
    spec[j] = cplx(re, im) * decay;
  }
  return inverse_transform(grid, spec);
}

namespace {

template <class Witness>
EnsembleStats ensemble(const Grid& grid, std::size_t count, std::uint64_t seed, std::size_t max_mode,
                       bool zero_mode, Witness&& witness) {
  std::mt19937_64 rng(seed);
  EnsembleStats stats;
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto w = witness(random_band_limited_field(grid, max_mode, rng, zero_mode));
    if (w.degenerate || !std::isfinite(w.ratio)) {
      ++stats.degenerate;
      continue;
    }
    stats.max_ratio = std::max(stats.max_ratio, w.ratio);
    total += w.ratio;
    ++stats.samples;
  }
  if (stats.samples > 0) stats.mean_ratio = total / static_cast<double>(stats.samples);
  return stats;
}

}  // namespace

EnsembleStats gns_ensemble(const Grid& grid, const GNSParams& params, std::size_t count,
                           std::uint64_t seed, std::size_t max_mode) {
  return ensemble(grid, count, seed, max_mode, true,
                  [&](const ComplexField& u) { return check_gns(u, params); });
}

EnsembleStats sobolev_ensemble(const Grid& grid, double s, std::size_t count, std::uint64_t seed,
                               std::size_t max_mode) {
  // The zero mode is excluded: constants have no fractional gradient.
  return ensemble(grid, count, seed, max_mode, false,
                  [&](const ComplexField& u) { return check_sobolev(u, s); });
}

DiagnosticsEvaluator::DiagnosticsEvaluator(const Grid& grid, const FractionalOrder& order,
                                           std::span<const double> V, std::span<const double> g)
    : grid_(grid),
      fft_(grid.size()),
      kinetic_symbol_(symbol(grid, 2.0 * order.s)),
      hs_symbol_(kinetic_symbol_),
      V_(V.begin(), V.end()),
      g_(g.begin(), g.end()),
      spectrum_(grid.size()) {
  if (V_.size() != grid.size() || g_.size() != grid.size()) {
    throw StructuralError("coefficient arrays do not match the grid");
  }
  for (auto& w : hs_symbol_) w += 1.0;
}

FieldDiagnostics DiagnosticsEvaluator::evaluate(std::span<const cplx> u) {
  const double dx = grid_.dx();
  fft_.forward(u, spectrum_);
  const auto sums = kernels::power_sums(u);

  FieldDiagnostics d;
  d.mass = std::sqrt(sums.sum2 * dx);
  d.l4_norm = std::pow(sums.sum4 * dx, 0.25);
  d.linf_norm = std::sqrt(sums.max2);
  d.energy.kinetic = kernels::weighted_abs2(spectrum_, kinetic_symbol_) * dx;
  d.energy.potential = kernels::weighted_abs2(u, V_) * dx;
  d.energy.interaction = 0.5 * kernels::weighted_abs4(u, g_) * dx;
  d.energy.total = d.energy.kinetic + d.energy.potential + d.energy.interaction;
  d.hs_norm = std::sqrt(kernels::weighted_abs2(spectrum_, hs_symbol_) * dx);
  return d;
}

}  // namespace fnls
