#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fnls/coefficient.hpp"
#include "fnls/dynamics.hpp"
#include "fnls/fit.hpp"
#include "fnls/mollifier.hpp"

namespace fnls {

/// Strictly decreasing regularization parameters, all admissible for the law.
class EpsilonNet {
 public:
  /// Throws DomainError if empty, not strictly decreasing, or any value is
  /// outside the law's range.
  static EpsilonNet make(std::vector<double> values, ScalingLaw law = ScalingLaw::power());
  /// first, first * ratio, ..., count values; ratio in (0, 1).
  static EpsilonNet geometric(double first, double ratio, std::size_t count,
                              ScalingLaw law = ScalingLaw::power());

  const std::vector<double>& values() const noexcept { return values_; }
  const ScalingLaw& law() const noexcept { return law_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_.at(i); }

 private:
  EpsilonNet(std::vector<double> values, ScalingLaw law) : values_(std::move(values)), law_(law) {}
  std::vector<double> values_;
  ScalingLaw law_;
};

enum class InitialProfile { stated_bump, smooth_bump };

std::string to_string(InitialProfile p);
/// "stated_bump" | "smooth_bump"; anything else is a ConfigError.
InitialProfile parse_initial_profile(std::string_view name);
ComplexField make_initial(InitialProfile p, const Grid& grid);

/// A regularized Cauchy problem: coefficients as specs, data as a preset.
struct Problem {
  std::string label;
  Grid grid{10.0, 8};
  FractionalOrder order{1.0};
  CoefficientSpec V;
  CoefficientSpec g;
  InitialProfile initial = InitialProfile::stated_bump;
  /// Real initial datum sampled from a profile; overrides `initial` when set.
  std::optional<SmoothProfile> initial_profile;
};

/// Initial datum of the problem on its grid.
ComplexField initial_field(const Problem& problem);
std::string describe_initial(const Problem& problem);

inline constexpr double kCaseX0 = 4.5;
inline constexpr double kCaseLength = 10.0;
inline constexpr double kCaseFinalTime = 10.0;
inline constexpr double kCaseDt = 5e-4;
inline constexpr std::size_t kCaseGridSize = 4096;

enum class CaseMarker {
  none,
  /// max_t |u(t, x0)| at the grid point nearest x0.
  x0_amplitude,
  /// sup_t ||u_eps(t) - u_ref(t)||_2 against the run without singular terms.
  influence,
  /// min over |x - x0| <= 0.25 of max_t |u(t, x)|.
  trapping,
};

std::string to_string(CaseMarker m);

struct CasePreset {
  std::string label;
  CoefficientSpec V;
  CoefficientSpec g;
  std::vector<double> default_net;
  CaseMarker marker = CaseMarker::none;
};

/// "case1" .. "case4"; anything else is a ConfigError.
CasePreset case_preset(std::string_view label);
std::vector<std::string> case_labels();

Problem case_problem(const CasePreset& preset, std::size_t n = kCaseGridSize,
                     InitialProfile initial = InitialProfile::stated_bump);

/// T = 10, dt = 5e-4, one snapshot at T, phase-wrap guard overridden.
SolverConfig case_solver_config();

/// Outcome of an exponent fit that may be impossible on the given data.
struct FitOutcome {
  std::optional<ExponentFit> fit;
  std::string note;  // why there is no fit
};

struct EpsilonRun {
  double epsilon = 0.0;
  double omega = 0.0;
  RunRecord record;
  double sup_hs = 0.0;
  std::optional<double> sup_l2_diff;
  std::optional<double> marker;
  /// ||V_eps - V||_inf + ||g_eps - g||_inf (compatibility study).
  std::optional<double> coefficient_error;
  /// sup_l2_diff / ((data error + coefficient error) e^T) (compatibility study).
  std::optional<double> witness_ratio;
};

struct SweepResult {
  std::string label;
  std::string kind;  // sweep | compat | unique | case
  EpsilonNet net;
  std::vector<EpsilonRun> runs;
  FitOutcome moderateness;   // N_hat of sup_t H^s against omega
  FitOutcome negligibility;  // k_hat of sup_l2_diff against eps
  FitOutcome decay;          // slope of sup_l2_diff against omega
  CaseMarker marker = CaseMarker::none;
  /// Qualitative trend of the marker along the net, when one is asserted.
  std::optional<bool> marker_trend_ok;
  /// Strictly decreasing differences (compatibility study).
  std::optional<bool> monotone;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, std::string>> parameters;
};

/// Runs the regularized problem for every eps, up to `jobs` at a time
/// (0 = hardware concurrency). Results are assembled in net order and are
/// independent of `jobs`.
SweepResult run_sweep(const Problem& problem, const EpsilonNet& net, const SolverConfig& config,
                      std::size_t jobs = 1);

struct DifferenceTrace {
  std::vector<double> times;
  std::vector<double> l2_diff;
  double sup = 0.0;
  RunRecord first;
  RunRecord second;
};

/// Advances two runs in lockstep and records ||u_a - u_b||_2 at every
/// diagnostic step of the shared config.
DifferenceTrace compare_runs(const SolverConfig& config, const ComplexField& u0a,
                             const GridCoefficient& Va, const GridCoefficient& ga,
                             const ComplexField& u0b, const GridCoefficient& Vb,
                             const GridCoefficient& gb);

/// u_eps against the classical solution with unmollified V, g. Needs
/// nonsingular specs (DomainError otherwise).
SweepResult compatibility_study(const Problem& problem, const EpsilonNet& net,
                                const SolverConfig& config, std::size_t jobs = 1);

enum class PerturbationTarget { data, potential, nonlinearity };

std::string to_string(PerturbationTarget t);
/// "data" | "potential" | "nonlinearity"; anything else is a ConfigError.
PerturbationTarget parse_perturbation_target(std::string_view name);

struct Perturbation {
  PerturbationTarget target = PerturbationTarget::data;
  double k = 3.0;
  double amplitude = 1.0;
  double center = 5.0;
  double width = 0.5;

  /// amplitude * eps^k * exp(-((x - center) / width)^2), nearest periodic image.
  std::vector<double> profile(const Grid& grid, double eps) const;
};

/// Base net against the net perturbed by eps^k * profile in one slot.
SweepResult uniqueness_study(const Problem& problem, const Perturbation& perturbation,
                             const EpsilonNet& net, const SolverConfig& config,
                             std::size_t jobs = 1);

/// Runs a case preset and evaluates its qualitative marker.
SweepResult case_report(const CasePreset& preset, const Problem& problem, const EpsilonNet& net,
                        const SolverConfig& config, std::size_t jobs = 1);

/// a_{i+1} <= (1 + slack) a_i for all i.
bool nonincreasing_with_slack(const std::vector<double>& values, double slack);
/// a_{i+1} >= (1 - slack) a_i for all i.
bool nondecreasing_with_slack(const std::vector<double>& values, double slack);

/// Calls body(i) for i in [0, count) on up to `jobs` threads. Rethrows the
/// exception of the lowest failing index after all workers finish.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace fnls
