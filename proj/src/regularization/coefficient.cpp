#include "fnls/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"
#include "periodic_sampling.hpp"

namespace fnls {

SmoothProfile SmoothProfile::sin2(double offset, double amplitude, double waves, double length) {
  if (offset < 0.0 || amplitude < -offset) {
    throw DomainError("sin2 profile must be nonnegative (offset >= 0, offset + amplitude >= 0)");
  }
  const double k = 2.0 * std::numbers::pi * waves / length;
  return SmoothProfile{"sin2",
                       {{"offset", offset}, {"amplitude", amplitude}, {"waves", waves}},
                       [=](double x) {
                         const double s = std::sin(k * x);
                         return offset + amplitude * s * s;
                       }};
}

SmoothProfile SmoothProfile::gaussian(double amplitude, double center, double width,
                                      double length) {
  if (amplitude < 0.0 || !(width > 0.0)) {
    throw DomainError("gaussian profile needs amplitude >= 0 and width > 0");
  }
  return SmoothProfile{"gaussian",
                       {{"amplitude", amplitude}, {"center", center}, {"width", width}},
                       [=](double x) {
                         const double d = std::remainder(x - center, length);
                         return amplitude * std::exp(-d * d / (2.0 * width * width));
                       }};
}

SmoothProfile SmoothProfile::custom(std::string label, std::function<double(double)> f) {
  return SmoothProfile{std::move(label), {}, std::move(f)};
}

CoefficientSpec::CoefficientSpec(std::vector<CoefficientTerm> terms) : terms_(std::move(terms)) {}

CoefficientSpec& CoefficientSpec::add(CoefficientTerm term) {
  terms_.push_back(std::move(term));
  return *this;
}

bool CoefficientSpec::is_singular() const noexcept {
  return std::any_of(terms_.begin(), terms_.end(), [](const CoefficientTerm& t) {
    return std::holds_alternative<Delta>(t) || std::holds_alternative<DeltaPower>(t);
  });
}

bool CoefficientSpec::is_constant() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const CoefficientTerm& t) { return std::holds_alternative<Constant>(t); });
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string CoefficientSpec::describe() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (const auto& term : terms_) {
    if (!first) out << " + ";
    first = false;
    std::visit(overloaded{
                   [&](const Constant& c) { out << c.value; },
                   [&](const SmoothProfile& p) { out << p.kind << "(x)"; },
                   [&](const Delta& d) { out << d.strength << "*delta(x-" << d.x0 << ")"; },
                   [&](const DeltaPower& d) {
                     out << d.strength << "*delta^" << d.k << "(x-" << d.x0 << ")";
                   },
               },
               term);
  }
  return out.str();
}

void validate(const CoefficientSpec& spec, const Grid& grid) {
  auto check_location = [&](double x0) {
    if (!(x0 >= 0.0 && x0 < grid.length())) {
      std::ostringstream msg;
      msg << "delta location " << x0 << " outside [0, " << grid.length() << ")";
      throw DomainError(msg.str());
    }
  };
  for (const auto& term : spec.terms()) {
    std::visit(overloaded{
                   [&](const Constant& c) {
                     if (!(c.value >= 0.0) || !std::isfinite(c.value)) {
                       throw DomainError("constant coefficient must be finite and nonnegative");
                     }
                   },
                   [&](const SmoothProfile& p) {
                     if (!p.eval) throw DomainError("smooth profile '" + p.kind + "' has no evaluator");
                   },
                   [&](const Delta& d) {
                     if (!(d.strength >= 0.0)) throw DomainError("delta strength must be nonnegative");
                     check_location(d.x0);
                   },
                   [&](const DeltaPower& d) {
                     if (!(d.strength >= 0.0)) throw DomainError("delta power strength must be nonnegative");
                     if (d.k < 2) throw DomainError("delta power exponent must be an integer >= 2");
                     check_location(d.x0);
                   },
               },
               term);
  }
}

namespace {

std::vector<double> sample_profile(const SmoothProfile& p, const Grid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out[j] = p(grid.x(j));
    if (!(out[j] >= 0.0) || !std::isfinite(out[j])) {
      std::ostringstream msg;
      msg << "smooth profile '" << p.kind << "' is negative or non-finite at x=" << grid.x(j);
      throw DomainError(msg.str());
    }
  }
  return out;
}

}  // namespace

std::vector<double> mollify_samples(const std::vector<double>& samples, double omega,
                                    const Grid& grid, const Mollifier& mollifier) {
  const std::size_t n = grid.size();
  if (samples.size() != n) throw StructuralError("sample count does not match grid");
  const auto kernel = detail::unit_mass_samples(mollifier, omega, grid, 0.0);

  const Fft fft(n);
  std::vector<cplx> f(samples.begin(), samples.end());
  std::vector<cplx> k(kernel.begin(), kernel.end());
  std::vector<cplx> fh(n), kh(n);
  fft.forward_raw(f, fh);
  fft.forward_raw(k, kh);
  // conv_j = dx sum_m f_m psi(x_j - x_m) = (dx / n) IDFT(DFT(f) DFT(psi))_j
  const double scale = grid.dx() / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) fh[j] *= kh[j] * scale;
  fft.inverse_raw(fh, f);

  std::vector<double> out(n);
  // Both factors are nonnegative; negative output is transform roundoff.
  for (std::size_t j = 0; j < n; ++j) out[j] = std::max(0.0, f[j].real());
  return out;
}

GridCoefficient regularize(const CoefficientSpec& spec, double eps, const ScalingLaw& law,
                           const Grid& grid, const Mollifier& mollifier) {
  validate(spec, grid);
  const double omega = law.omega(eps);
  GridCoefficient out{grid, std::vector<double>(grid.size(), 0.0), spec.describe(), eps, omega, {}};

  bool uses_mollifier = false;
  bool empty_support = false;
  for (const auto& term : spec.terms()) {
    std::visit(overloaded{
                   [&](const Constant& c) {
                     for (auto& v : out.values) v += c.value;
                   },
                   [&](const SmoothProfile& p) {
                     uses_mollifier = true;
                     const auto conv = mollify_samples(sample_profile(p, grid), omega, grid, mollifier);
                     for (std::size_t j = 0; j < conv.size(); ++j) out.values[j] += conv[j];
                   },
                   [&](const Delta& d) {
                     uses_mollifier = true;
                     const auto psi = detail::unit_mass_samples(mollifier, omega, grid, d.x0);
                     if (std::all_of(psi.begin(), psi.end(), [](double v) { return v == 0.0; })) {
                       empty_support = true;
                     }
                     for (std::size_t j = 0; j < psi.size(); ++j) out.values[j] += d.strength * psi[j];
                   },
                   [&](const DeltaPower& d) {
                     uses_mollifier = true;
                     const double scale = d.strength * std::pow(omega, -d.k);
                     detail::add_periodic(grid, d.x0, omega, out.values, [&](double y) {
                       return scale * std::pow(mollifier(y / omega), d.k);
                     });
                   },
               },
               term);
  }
  if (uses_mollifier && under_resolved(omega, grid)) {
    out.warnings.push_back(detail::under_resolution_message(eps, omega, grid));
  }
  if (empty_support) out.warnings.push_back(detail::empty_support_message(eps, omega));
  return out;
}

GridCoefficient sample_classical(const CoefficientSpec& spec, const Grid& grid) {
  validate(spec, grid);
  if (spec.is_singular()) {
    throw DomainError("coefficient '" + spec.describe() + "' is singular; no classical samples");
  }
  GridCoefficient out{grid, std::vector<double>(grid.size(), 0.0), spec.describe(), 0.0, 0.0, {}};
  for (const auto& term : spec.terms()) {
    if (const auto* c = std::get_if<Constant>(&term)) {
      for (auto& v : out.values) v += c->value;
    } else if (const auto* p = std::get_if<SmoothProfile>(&term)) {
      const auto s = sample_profile(*p, grid);
      for (std::size_t j = 0; j < s.size(); ++j) out.values[j] += s[j];
    }
  }
  return out;
}

}  // namespace fnls
