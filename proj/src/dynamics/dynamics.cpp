#include "fnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fnls/error.hpp"
#include "fnls/kernels.hpp"

namespace fnls {

double phase_wrap_limit(const Grid& grid, const FractionalOrder& order) {
  double kmax = 0.0;
  for (double k : grid.wavenumbers()) kmax = std::max(kmax, std::abs(k));
  return 2.0 * std::numbers::pi / std::pow(kmax, 2.0 * order.s);
}

std::size_t SolverConfig::total_steps() const {
  return static_cast<std::size_t>(std::llround(final_time / dt));
}

void SolverConfig::validate(const Grid& grid) const {
  auto fail = [](const std::string& why) { throw DomainError("solver config: " + why); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) fail("T must be nonnegative");
  if (final_time > 0.0 && dt > final_time) fail("dt must not exceed T");
  if (diag_stride == 0) fail("diag_stride must be >= 1");
  const double steps = final_time / dt;
  if (std::abs(steps - std::round(steps)) > 1e-8 * std::max(1.0, steps)) {
    fail("T must be an integer multiple of dt");
  }
  double previous = -1.0;
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= final_time)) fail("snapshot times must lie in [0, T]");
    if (!(t > previous)) fail("snapshot times must be strictly increasing");
    previous = t;
  }
  const double limit = phase_wrap_limit(grid, order);
  if (dt > limit && !allow_phase_wrap) {
    std::ostringstream msg;
    msg << "dt=" << dt << " exceeds the phase-wrap limit 2pi/max|k|^{2s}=" << limit
        << " (set allow_phase_wrap to override)";
    fail(msg.str());
  }
}

double nonlinear_phase_per_step(const ComplexField& u, std::span<const double> g, double dt) {
  if (g.size() != u.size()) throw StructuralError("coefficient array does not match the field size");
  double m = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) m = std::max(m, g[j] * std::norm(u[j]));
  return dt * m;
}

double initial_bump_value(double x) noexcept {
  const double d = x - 5.0;
  return std::abs(d) < 0.5 ? std::exp(1.0 / (d * d + 0.25)) : 0.0;
}

double smooth_bump_value(double x) noexcept {
  const double d = x - 5.0;
  return std::abs(d) < 0.5 ? std::exp(-1.0 / (0.25 - d * d)) : 0.0;
}

namespace {

ComplexField sample(const Grid& grid, double (*f)(double) noexcept) {
  ComplexField u(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) u[j] = cplx(f(grid.x(j)), 0.0);
  return u;
}

bool finite_field(std::span<const cplx> u) { return std::isfinite(kernels::power_sums(u).sum2); }

}  // namespace

ComplexField initial_bump(const Grid& grid) { return sample(grid, initial_bump_value); }
ComplexField smooth_bump(const Grid& grid) { return sample(grid, smooth_bump_value); }

Propagator::Propagator(const Grid& grid, const FractionalOrder& order, double dt,
                       std::span<const double> V, std::span<const double> g, Integrator integrator,
                       bool dealias)
    : fft_(grid.size()),
      integrator_(integrator),
      dt_(dt),
      V_(V.begin(), V.end()),
      g_(g.begin(), g.end()),
      kinetic_phase_(grid.size()),
      spectrum_(grid.size()),
      theta_(grid.size()),
      rotation_(grid.size()) {
  const std::size_t n = grid.size();
  if (V_.size() != n || g_.size() != n) {
    throw StructuralError("coefficient arrays do not match the grid");
  }
  const auto w = symbol(grid, 2.0 * order.s);
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto cutoff = static_cast<std::ptrdiff_t>(n / 3);
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = dt * w[j];
    const bool keep = !dealias || std::abs(grid.signed_index(j)) <= cutoff;
    kinetic_phase_[j] = keep ? cplx(std::cos(phase), -std::sin(phase)) * inv_n : cplx(0.0, 0.0);
  }
}

void Propagator::potential(std::span<cplx> u, double dt) {
  kernels::phase_angles(u, V_, g_, dt, theta_);
  kernels::rotate_phase(u, theta_, rotation_);
}

void Propagator::kinetic(std::span<cplx> u) {
  fft_.forward_raw(u, spectrum_);
  kernels::mul_complex(spectrum_, kinetic_phase_);
  fft_.inverse_raw(spectrum_, u);
}

void Propagator::step(std::span<cplx> u) {
  if (integrator_ == Integrator::strang) {
    potential(u, 0.5 * dt_);
    kinetic(u);
    potential(u, 0.5 * dt_);
  } else {
    potential(u, dt_);
    kinetic(u);
  }
}

ComplexField potential_flow(const ComplexField& u, std::span<const double> V,
                            std::span<const double> g, double dt) {
  if (V.size() != u.size() || g.size() != u.size()) {
    throw StructuralError("coefficient arrays do not match the field size");
  }
  ComplexField out = u;
  std::vector<double> theta(u.size());
  std::vector<cplx> scratch(u.size());
  kernels::phase_angles(out.values(), V, g, dt, theta);
  kernels::rotate_phase(out.values(), theta, scratch);
  return out;
}

ComplexField kinetic_flow(const ComplexField& u, const FractionalOrder& order, double dt) {
  const std::vector<double> zero(u.size(), 0.0);
  Propagator p(u.grid(), order, dt, zero, zero);
  ComplexField out = u;
  p.kinetic(out.values());
  return out;
}

RunState strang_step(const RunState& state, const FractionalOrder& order, double dt) {
  Propagator p(state.field.grid(), order, dt, state.V.values, state.g.values);
  RunState next = state;
  p.step(next.field.values());
  next.step_count = state.step_count + 1;
  next.t = static_cast<double>(next.step_count) * dt;
  if (!finite_field(next.field.values())) {
    throw NumericalBlowup(next.step_count,
                          "non-finite field after step " + std::to_string(next.step_count));
  }
  return next;
}

double RunRecord::sup_hs_norm() const {
  double m = 0.0;
  for (double v : hs_norm) m = std::max(m, v);
  return m;
}

double RunRecord::relative_mass_drift() const {
  if (mass.empty() || mass.front() == 0.0) return 0.0;
  double m = 0.0;
  for (double v : mass) m = std::max(m, std::abs(v - mass.front()));
  return m / mass.front();
}

double RunRecord::relative_energy_drift() const {
  if (energy.empty() || energy.front().total == 0.0) return 0.0;
  const double h0 = energy.front().total;
  double m = 0.0;
  for (const auto& h : energy) m = std::max(m, std::abs(h.total - h0));
  return m / std::abs(h0);
}

Simulation::Simulation(SolverConfig config, const ComplexField& u0, const GridCoefficient& V,
                       const GridCoefficient& g)
    : config_(std::move(config)),
      total_(0),
      field_(u0),
      propagator_(u0.grid(), config_.order, config_.dt, V.values, g.values, config_.integrator,
                  config_.dealias),
      evaluator_(u0.grid(), config_.order, V.values, g.values) {
  if (!V.grid.same_layout(u0.grid()) || !g.grid.same_layout(u0.grid())) {
    throw StructuralError("coefficient grids do not match the initial field grid");
  }
  config_.validate(u0.grid());
  total_ = config_.total_steps();
  record_.config = config_;
  record_.warnings = V.warnings;
  record_.warnings.insert(record_.warnings.end(), g.warnings.begin(), g.warnings.end());
  const double phase = nonlinear_phase_per_step(u0, g.values, config_.dt);
  if (phase > 1.0) {
    std::ostringstream msg;
    msg << "temporal under-resolution: nonlinear phase per step dt*max(g|u0|^2)=" << phase
        << " rad > 1; the discrete flow may be chaotic";
    record_.warnings.push_back(msg.str());
  }

  for (double t : config_.snapshot_times) {
    const auto s = std::min<std::size_t>(total_, static_cast<std::size_t>(std::llround(t / config_.dt)));
    record_.max_binding_error =
        std::max(record_.max_binding_error, std::abs(static_cast<double>(s) * config_.dt - t));
    snapshot_steps_.emplace_back(s, t);
  }
  if (config_.track_pointwise_max) record_.pointwise_max.assign(u0.size(), 0.0);
  record_current();
}

bool Simulation::is_record_step() const noexcept {
  return step_ % config_.diag_stride == 0 || step_ == total_;
}

void Simulation::record_current() {
  if (is_record_step()) {
    const auto d = evaluator_.evaluate(field_.values());
    record_.times.push_back(time());
    record_.mass.push_back(d.mass);
    record_.energy.push_back(d.energy);
    record_.hs_norm.push_back(d.hs_norm);
    record_.l4_norm.push_back(d.l4_norm);
    record_.linf_norm.push_back(d.linf_norm);
    if (config_.track_pointwise_max) kernels::running_max_abs(record_.pointwise_max, field_.values());
  }
  while (next_snapshot_ < snapshot_steps_.size() && snapshot_steps_[next_snapshot_].first == step_) {
    record_.snapshots.push_back(
        Snapshot{snapshot_steps_[next_snapshot_].second, time(), step_, field_});
    ++next_snapshot_;
  }
}

void Simulation::advance() {
  if (finished()) return;
  propagator_.step(field_.values());
  ++step_;
  if (!finite_field(field_.values())) {
    throw NumericalBlowup(step_, "non-finite field after step " + std::to_string(step_));
  }
  record_current();
}

RunRecord run(const SolverConfig& config, const ComplexField& u0, const GridCoefficient& V,
              const GridCoefficient& g) {
  Simulation sim(config, u0, V, g);
  while (!sim.finished()) sim.advance();
  return sim.take_record();
}

}  // namespace fnls
