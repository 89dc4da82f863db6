#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fnls/experiments.hpp"

namespace fnls {

// Config dialect: JSON (comments allowed), every object closed against
// unknown keys. Top-level keys:
//   case            optional preset label; supplies defaults for everything below
//   grid            {L, n}
//   order           {s}
//   time            {T, dt, snapshot_times[], diag_stride, integrator, dealias, allow_phase_wrap}
//   coefficients    {V: [term...], g: [term...]}
//   initial         {preset: name} | {profile: term}
//   regularization  {epsilon | net[] | geometric{first, ratio, count}, scaling{kind, N0}}
//   perturbation    {target, k, amplitude, center, width}
//   output          {dir, formats[]}
// Terms: {type: constant, value} | {type: sin2, offset, amplitude, waves}
//      | {type: gaussian, amplitude, center, width} | {type: delta, x0, strength}
//      | {type: delta_power, x0, k, strength}

struct RunConfig {
  std::optional<std::string> case_label;
  Problem problem;
  SolverConfig solver;
  std::vector<double> net;
  ScalingLaw law = ScalingLaw::power();
  Perturbation perturbation;
  std::string output_dir = "out";
  std::vector<std::string> formats{"csv"};

  EpsilonNet epsilon_net() const { return EpsilonNet::make(net, law); }
};

/// Validates the tree and every numeric constraint of the owning types.
/// Errors are ConfigError naming the offending key path.
RunConfig parse_config(const nlohmann::json& tree);

/// Parses text; syntax errors report line and column.
RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");

/// Reads a file into a tree without schema validation. Missing files and
/// syntax errors are ConfigErrors naming the path.
nlohmann::json load_config_tree(const std::filesystem::path& path);

/// Reads and parses a file; a missing or unreadable file is a ConfigError
/// naming the path.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: every field explicit, nets expanded, keys sorted.
/// Re-parses to an equivalent config.
nlohmann::json to_json(const RunConfig& config);

/// The preset config of a case label with the standard grid, time and net.
RunConfig case_config(std::string_view label);

nlohmann::json coefficient_to_json(const CoefficientSpec& spec);

/// Same canonical form.
bool equivalent(const RunConfig& a, const RunConfig& b);

}  // namespace fnls
