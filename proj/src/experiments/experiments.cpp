#include "fnls/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "fnls/error.hpp"

namespace fnls {
namespace {

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

double l2_distance(std::span<const cplx> a, std::span<const cplx> b, double dx) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::norm(a[j] - b[j]);
  return std::sqrt(acc * dx);
}

double sup_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

/// Spec with Delta and DeltaPower terms removed.
CoefficientSpec regular_part(const CoefficientSpec& spec) {
  CoefficientSpec out;
  for (const auto& term : spec.terms()) {
    if (!std::holds_alternative<Delta>(term) && !std::holds_alternative<DeltaPower>(term)) out.add(term);
  }
  return out;
}

void collect_warnings(SweepResult& result) {
  for (const auto& run : result.runs) {
    for (const auto& w : run.record.warnings) {
      result.warnings.push_back("eps=" + format_number(run.epsilon) + ": " + w);
    }
  }
}

template <class Fit>
FitOutcome try_fit(Fit&& fit) {
  FitOutcome out;
  try {
    out.fit = fit();
  } catch (const DomainError& e) {
    out.note = e.what();
  }
  return out;
}

FitOutcome moderateness_of(const SweepResult& r) {
  std::vector<EpsilonSample> samples;
  for (const auto& run : r.runs) samples.push_back({run.epsilon, run.sup_hs});
  return try_fit([&] { return fit_moderateness(samples, r.net.law()); });
}

std::vector<EpsilonSample> difference_samples(const SweepResult& r) {
  std::vector<EpsilonSample> samples;
  for (const auto& run : r.runs) samples.push_back({run.epsilon, run.sup_l2_diff.value_or(0.0)});
  return samples;
}

SweepResult empty_result(const Problem& problem, const EpsilonNet& net, std::string kind) {
  SweepResult r{problem.label, std::move(kind), net, {}, {}, {}, {}, CaseMarker::none, {}, {}, {}, {}};
  r.runs.resize(net.size());
  r.parameters.emplace_back("initial", describe_initial(problem));
  r.parameters.emplace_back("s", format_number(problem.order.s));
  r.parameters.emplace_back("scaling", net.law().describe());
  return r;
}

GridCoefficient regularized(const CoefficientSpec& spec, double eps, const ScalingLaw& law,
                            const Grid& grid) {
  return regularize(spec, eps, law, grid);
}

SolverConfig with_order(SolverConfig config, const Problem& problem) {
  config.order = problem.order;
  return config;
}

}  // namespace

EpsilonNet EpsilonNet::make(std::vector<double> values, ScalingLaw law) {
  if (values.empty()) throw DomainError("epsilon net is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    law.check_epsilon(values[i]);
    if (i > 0 && !(values[i] < values[i - 1])) {
      throw DomainError("epsilon net must be strictly decreasing");
    }
  }
  return EpsilonNet(std::move(values), law);
}

EpsilonNet EpsilonNet::geometric(double first, double ratio, std::size_t count, ScalingLaw law) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("geometric net needs ratio in (0, 1)");
  std::vector<double> values;
  for (std::size_t i = 0; i < count; ++i) values.push_back(first * std::pow(ratio, static_cast<double>(i)));
  return make(std::move(values), law);
}

std::string to_string(InitialProfile p) {
  return p == InitialProfile::stated_bump ? "stated_bump" : "smooth_bump";
}

InitialProfile parse_initial_profile(std::string_view name) {
  if (name == "stated_bump") return InitialProfile::stated_bump;
  if (name == "smooth_bump") return InitialProfile::smooth_bump;
  throw ConfigError("unknown initial profile '" + std::string(name) +
                    "' (expected stated_bump or smooth_bump)");
}

ComplexField make_initial(InitialProfile p, const Grid& grid) {
  return p == InitialProfile::stated_bump ? initial_bump(grid) : smooth_bump(grid);
}

ComplexField initial_field(const Problem& problem) {
  if (!problem.initial_profile) return make_initial(problem.initial, problem.grid);
  const auto& f = *problem.initial_profile;
  if (!f.eval) throw DomainError("initial profile '" + f.kind + "' has no evaluator");
  ComplexField u(problem.grid);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = f(problem.grid.x(j));
  return u;
}

std::string describe_initial(const Problem& problem) {
  return problem.initial_profile ? problem.initial_profile->kind + "(x)" : to_string(problem.initial);
}

std::string to_string(CaseMarker m) {
  switch (m) {
    case CaseMarker::none: return "none";
    case CaseMarker::x0_amplitude: return "x0_amplitude";
    case CaseMarker::influence: return "influence";
    case CaseMarker::trapping: return "trapping";
  }
  return "none";
}

CasePreset case_preset(std::string_view label) {
  const CoefficientSpec one = CoefficientSpec::constant(1.0);
  const CoefficientSpec singular({Constant{1.0}, Delta{kCaseX0, 1.0}});
  const std::vector<double> main_net = {1.0, 0.7, 0.3, 0.01};
  if (label == "case1") return {"case1", one, one, main_net, CaseMarker::none};
  if (label == "case2") return {"case2", singular, one, main_net, CaseMarker::x0_amplitude};
  if (label == "case3") return {"case3", one, singular, {0.015, 0.01, 0.009, 0.005}, CaseMarker::influence};
  if (label == "case4") return {"case4", singular, singular, main_net, CaseMarker::trapping};
  throw ConfigError("unknown case '" + std::string(label) + "' (expected case1, case2, case3 or case4)");
}

std::vector<std::string> case_labels() { return {"case1", "case2", "case3", "case4"}; }

Problem case_problem(const CasePreset& preset, std::size_t n, InitialProfile initial) {
  return Problem{preset.label, Grid(kCaseLength, n), FractionalOrder(1.0), preset.V, preset.g, initial, std::nullopt};
}

SolverConfig case_solver_config() {
  SolverConfig c;
  c.final_time = kCaseFinalTime;
  c.dt = kCaseDt;
  c.snapshot_times = {kCaseFinalTime};
  c.allow_phase_wrap = true;
  return c;
}

bool nonincreasing_with_slack(const std::vector<double>& values, double slack) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > (1.0 + slack) * values[i - 1]) return false;
  }
  return true;
}

bool nondecreasing_with_slack(const std::vector<double>& values, double slack) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < (1.0 - slack) * values[i - 1]) return false;
  }
  return true;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  std::vector<std::exception_ptr> errors(count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SweepResult run_sweep(const Problem& problem, const EpsilonNet& net, const SolverConfig& config,
                      std::size_t jobs) {
  SweepResult result = empty_result(problem, net, "sweep");
  const auto cfg = with_order(config, problem);
  const auto u0 = initial_field(problem);
  parallel_for(net.size(), jobs, [&](std::size_t i) {
    const double eps = net[i];
    const auto V = regularized(problem.V, eps, net.law(), problem.grid);
    const auto g = regularized(problem.g, eps, net.law(), problem.grid);
    auto& run_i = result.runs[i];
    run_i.epsilon = eps;
    run_i.omega = net.law().omega(eps);
    run_i.record = run(cfg, u0, V, g);
    run_i.sup_hs = run_i.record.sup_hs_norm();
  });
  result.moderateness = moderateness_of(result);
  collect_warnings(result);
  return result;
}

DifferenceTrace compare_runs(const SolverConfig& config, const ComplexField& u0a,
                             const GridCoefficient& Va, const GridCoefficient& ga,
                             const ComplexField& u0b, const GridCoefficient& Vb,
                             const GridCoefficient& gb) {
  if (!u0a.grid().same_layout(u0b.grid())) throw StructuralError("compared runs use different grids");
  Simulation a(config, u0a, Va, ga);
  Simulation b(config, u0b, Vb, gb);
  DifferenceTrace trace;
  const double dx = u0a.grid().dx();
  auto sample = [&] {
    const double d = l2_distance(a.field().values(), b.field().values(), dx);
    trace.times.push_back(a.time());
    trace.l2_diff.push_back(d);
    trace.sup = std::max(trace.sup, d);
  };
  sample();
  while (!a.finished()) {
    a.advance();
    b.advance();
    if (a.is_record_step()) sample();
  }
  trace.first = a.take_record();
  trace.second = b.take_record();
  return trace;
}

SweepResult compatibility_study(const Problem& problem, const EpsilonNet& net,
                                const SolverConfig& config, std::size_t jobs) {
  if (problem.V.is_singular() || problem.g.is_singular()) {
    throw DomainError("compatibility study needs nonsingular V and g (no classical solution otherwise)");
  }
  SweepResult result = empty_result(problem, net, "compat");
  const auto cfg = with_order(config, problem);
  const auto u0 = initial_field(problem);
  const auto V = sample_classical(problem.V, problem.grid);
  const auto g = sample_classical(problem.g, problem.grid);
  const double growth = std::exp(cfg.final_time);
  parallel_for(net.size(), jobs, [&](std::size_t i) {
    const double eps = net[i];
    const auto Ve = regularized(problem.V, eps, net.law(), problem.grid);
    const auto ge = regularized(problem.g, eps, net.law(), problem.grid);
    auto trace = compare_runs(cfg, u0, Ve, ge, u0, V, g);
    auto& run_i = result.runs[i];
    run_i.epsilon = eps;
    run_i.omega = net.law().omega(eps);
    run_i.record = std::move(trace.first);
    run_i.sup_hs = run_i.record.sup_hs_norm();
    run_i.sup_l2_diff = trace.sup;
    // The data are not regularized, so the data error is zero.
    const double coefficient_error = sup_abs_difference(Ve.values, V.values) + sup_abs_difference(ge.values, g.values);
    run_i.coefficient_error = coefficient_error;
    const auto w = make_witness(trace.sup, coefficient_error * growth, "compatibility");
    if (!w.degenerate) run_i.witness_ratio = w.ratio;
  });
  std::vector<double> diffs;
  for (const auto& r : result.runs) diffs.push_back(*r.sup_l2_diff);
  bool strict = true;
  for (std::size_t i = 1; i < diffs.size(); ++i) strict = strict && diffs[i] < diffs[i - 1];
  result.monotone = strict;
  result.moderateness = moderateness_of(result);
  result.decay = try_fit([&] { return fit_decay(difference_samples(result), net.law()); });
  collect_warnings(result);
  return result;
}

std::string to_string(PerturbationTarget t) {
  switch (t) {
    case PerturbationTarget::data: return "data";
    case PerturbationTarget::potential: return "potential";
    case PerturbationTarget::nonlinearity: return "nonlinearity";
  }
  return "data";
}

PerturbationTarget parse_perturbation_target(std::string_view name) {
  if (name == "data") return PerturbationTarget::data;
  if (name == "potential") return PerturbationTarget::potential;
  if (name == "nonlinearity") return PerturbationTarget::nonlinearity;
  throw ConfigError("unknown perturbation target '" + std::string(name) +
                    "' (expected data, potential or nonlinearity)");
}

std::vector<double> Perturbation::profile(const Grid& grid, double eps) const {
  if (!(amplitude >= 0.0) || !(width > 0.0) || !std::isfinite(k)) {
    throw DomainError("perturbation needs amplitude >= 0, width > 0 and finite k");
  }
  const double scale = amplitude * std::pow(eps, k);
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = std::remainder(grid.x(j) - center, grid.length()) / width;
    out[j] = scale * std::exp(-d * d);
  }
  return out;
}

SweepResult uniqueness_study(const Problem& problem, const Perturbation& perturbation,
                             const EpsilonNet& net, const SolverConfig& config, std::size_t jobs) {
  SweepResult result = empty_result(problem, net, "unique");
  result.parameters.emplace_back("target", to_string(perturbation.target));
  result.parameters.emplace_back("k", format_number(perturbation.k));
  result.parameters.emplace_back("amplitude", format_number(perturbation.amplitude));
  const auto cfg = with_order(config, problem);
  const auto u0 = initial_field(problem);
  parallel_for(net.size(), jobs, [&](std::size_t i) {
    const double eps = net[i];
    const auto V = regularized(problem.V, eps, net.law(), problem.grid);
    const auto g = regularized(problem.g, eps, net.law(), problem.grid);
    const auto bump = perturbation.profile(problem.grid, eps);
    ComplexField u0p = u0;
    GridCoefficient Vp = V, gp = g;
    switch (perturbation.target) {
      case PerturbationTarget::data:
        for (std::size_t j = 0; j < bump.size(); ++j) u0p[j] += bump[j];
        break;
      case PerturbationTarget::potential:
        for (std::size_t j = 0; j < bump.size(); ++j) Vp.values[j] += bump[j];
        break;
      case PerturbationTarget::nonlinearity:
        for (std::size_t j = 0; j < bump.size(); ++j) gp.values[j] += bump[j];
        break;
    }
    auto trace = compare_runs(cfg, u0, V, g, u0p, Vp, gp);
    auto& run_i = result.runs[i];
    run_i.epsilon = eps;
    run_i.omega = net.law().omega(eps);
    run_i.record = std::move(trace.first);
    run_i.sup_hs = run_i.record.sup_hs_norm();
    run_i.sup_l2_diff = trace.sup;
  });
  result.moderateness = moderateness_of(result);
  result.negligibility = try_fit([&] { return fit_negligibility(difference_samples(result)); });
  collect_warnings(result);
  return result;
}

SweepResult case_report(const CasePreset& preset, const Problem& problem, const EpsilonNet& net,
                        const SolverConfig& config, std::size_t jobs) {
  SolverConfig cfg = with_order(config, problem);
  const auto x0 = kCaseX0;
  SweepResult result = [&] {
    if (preset.marker != CaseMarker::influence) {
      if (preset.marker != CaseMarker::none) cfg.track_pointwise_max = true;
      return run_sweep(problem, net, cfg, jobs);
    }
    // Lockstep against the run without the singular terms.
    SweepResult r = empty_result(problem, net, "case");
    const auto u0 = initial_field(problem);
    const auto V0 = sample_classical(regular_part(problem.V), problem.grid);
    const auto g0 = sample_classical(regular_part(problem.g), problem.grid);
    parallel_for(net.size(), jobs, [&](std::size_t i) {
      const double eps = net[i];
      const auto V = regularized(problem.V, eps, net.law(), problem.grid);
      const auto g = regularized(problem.g, eps, net.law(), problem.grid);
      auto trace = compare_runs(cfg, u0, V, g, u0, V0, g0);
      auto& run_i = r.runs[i];
      run_i.epsilon = eps;
      run_i.omega = net.law().omega(eps);
      run_i.record = std::move(trace.first);
      run_i.sup_hs = run_i.record.sup_hs_norm();
      run_i.sup_l2_diff = trace.sup;
      run_i.marker = trace.sup;
    });
    r.moderateness = moderateness_of(r);
    collect_warnings(r);
    return r;
  }();
  result.kind = "case";
  result.marker = preset.marker;

  const Grid& grid = problem.grid;
  for (auto& r : result.runs) {
    const auto& pmax = r.record.pointwise_max;
    if (preset.marker == CaseMarker::x0_amplitude) {
      r.marker = pmax.at(grid.nearest_index(x0));
    } else if (preset.marker == CaseMarker::trapping) {
      double a = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double d = std::abs(std::remainder(grid.x(j) - x0, grid.length()));
        if (d <= 0.25) a = std::min(a, pmax.at(j));
      }
      r.marker = a;
    }
  }
  std::vector<double> markers;
  for (const auto& r : result.runs) {
    if (r.marker) markers.push_back(*r.marker);
  }
  if (preset.marker == CaseMarker::trapping) result.marker_trend_ok = nonincreasing_with_slack(markers, 0.05);
  if (preset.marker == CaseMarker::influence) result.marker_trend_ok = nondecreasing_with_slack(markers, 0.05);
  result.parameters.emplace_back("marker", to_string(preset.marker));
  result.parameters.emplace_back("diag_stride", std::to_string(cfg.diag_stride));
  return result;
}

}  // namespace fnls
