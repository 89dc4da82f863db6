#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fnls/diagnostics.hpp"
#include "fnls/fft.hpp"
#include "fnls/grid.hpp"
#include "fnls/mollifier.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

// Time integration of i u_t = (-Delta)^s u + V u + g |u|^2 u on the periodic
// grid by splitting into two exactly solvable flows:
//   kinetic:   i u_t = (-Delta)^s u      -> uhat_j *= exp(-i dt |k_j|^{2s})
//   potential: i u_t = (V + g|u|^2) u    -> u_j *= exp(-i dt (V_j + g_j |u_j|^2))
// Both flows preserve the discrete L2 norm, so mass is conserved to roundoff.

enum class Integrator { strang, lie };

struct SolverConfig {
  FractionalOrder order{1.0};
  double final_time = 10.0;
  double dt = 1e-3;
  std::vector<double> snapshot_times;
  std::size_t diag_stride = 1;
  /// Zero modes with |jt| > n/3 in every kinetic step. Breaks exact mass
  /// conservation (the projection can only remove mass).
  bool dealias = false;
  Integrator integrator = Integrator::strang;
  /// Accept dt above phase_wrap_limit().
  bool allow_phase_wrap = false;
  /// Keep the pointwise running maximum of |u| over recorded steps.
  bool track_pointwise_max = true;

  /// Throws DomainError on any violated constraint.
  void validate(const Grid& grid) const;

  /// round(T / dt).
  std::size_t total_steps() const;
};

/// 2 pi / max_j |k_j|^{2s}: the step at which the fastest kinetic phase
/// wraps once.
double phase_wrap_limit(const Grid& grid, const FractionalOrder& order);

/// dt * max_j g_j |u_j|^2. Above about 1 rad the split step no longer
/// resolves the nonlinear time scale and the discrete map turns chaotic;
/// Simulation records a warning in that case.
double nonlinear_phase_per_step(const ComplexField& u, std::span<const double> g, double dt);

/// exp(1/((x-5)^2 + 0.25)) for |x - 5| < 0.5, else 0. Jumps from e^2 to 0 at
/// the edge of its support.
double initial_bump_value(double x) noexcept;

/// exp(-1/(0.25 - (x-5)^2)) for |x - 5| < 0.5, else 0. C-infinity.
double smooth_bump_value(double x) noexcept;

ComplexField initial_bump(const Grid& grid);
ComplexField smooth_bump(const Grid& grid);

struct RunState {
  double t = 0.0;
  ComplexField field;
  GridCoefficient V;
  GridCoefficient g;
  std::size_t step_count = 0;
};

ComplexField potential_flow(const ComplexField& u, std::span<const double> V,
                            std::span<const double> g, double dt);

ComplexField kinetic_flow(const ComplexField& u, const FractionalOrder& order, double dt);

/// One Strang step potential(dt/2) . kinetic(dt) . potential(dt/2).
/// Throws NumericalBlowup carrying the new step index if the field stops
/// being finite.
RunState strang_step(const RunState& state, const FractionalOrder& order, double dt);

/// Stateful stepper with precomputed kinetic phases and scratch buffers.
/// Single-owner; not for concurrent use.
class Propagator {
 public:
  Propagator(const Grid& grid, const FractionalOrder& order, double dt, std::span<const double> V,
             std::span<const double> g, Integrator integrator = Integrator::strang,
             bool dealias = false);

  /// Advances u by one dt in place.
  void step(std::span<cplx> u);

  void potential(std::span<cplx> u, double dt);
  void kinetic(std::span<cplx> u);

 private:
  Fft fft_;
  Integrator integrator_;
  double dt_;
  std::vector<double> V_;
  std::vector<double> g_;
  std::vector<cplx> kinetic_phase_;  // exp(-i dt |k|^{2s}) / n, masked when dealiasing
  std::vector<cplx> spectrum_;
  std::vector<double> theta_;
  std::vector<cplx> rotation_;
};

struct Snapshot {
  double requested_time = 0.0;
  double time = 0.0;
  std::size_t step = 0;
  ComplexField field;
};

struct RunRecord {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<Hamiltonian> energy;
  std::vector<double> hs_norm;
  std::vector<double> l4_norm;
  std::vector<double> linf_norm;
  std::vector<Snapshot> snapshots;
  /// max over recorded steps of |u(t, x_j)|; empty unless tracked.
  std::vector<double> pointwise_max;
  SolverConfig config;
  std::vector<std::string> warnings;
  /// Largest |bound step time - requested snapshot time|.
  double max_binding_error = 0.0;

  std::size_t size() const noexcept { return times.size(); }
  double sup_hs_norm() const;
  double relative_mass_drift() const;
  double relative_energy_drift() const;
};

/// Incremental run: the same stepping and recording logic as run(), exposed
/// so that several runs can be advanced in lockstep.
class Simulation {
 public:
  Simulation(SolverConfig config, const ComplexField& u0, const GridCoefficient& V,
             const GridCoefficient& g);

  std::size_t step_index() const noexcept { return step_; }
  std::size_t total_steps() const noexcept { return total_; }
  double time() const noexcept { return static_cast<double>(step_) * config_.dt; }
  bool finished() const noexcept { return step_ >= total_; }
  const ComplexField& field() const noexcept { return field_; }

  /// Diagnostics are recorded at multiples of the stride and at the last step.
  bool is_record_step() const noexcept;

  /// One step; records diagnostics and snapshots that fall on the new step.
  void advance();

  const RunRecord& record() const noexcept { return record_; }
  RunRecord take_record() { return std::move(record_); }

 private:
  void record_current();

  SolverConfig config_;
  std::size_t total_;
  std::size_t step_ = 0;
  ComplexField field_;
  Propagator propagator_;
  DiagnosticsEvaluator evaluator_;
  std::vector<std::pair<std::size_t, double>> snapshot_steps_;  // (step, requested time)
  std::size_t next_snapshot_ = 0;
  RunRecord record_;
};

/// Runs from t = 0 to round(T/dt) dt. Deterministic for identical inputs.
RunRecord run(const SolverConfig& config, const ComplexField& u0, const GridCoefficient& V,
              const GridCoefficient& g);

}  // namespace fnls
