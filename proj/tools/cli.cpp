#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <optional>
#include <ostream>
#include <string>

#include "fnls/config.hpp"
#include "fnls/diagnostics.hpp"
#include "fnls/error.hpp"
#include "fnls/output.hpp"
#include "fnls/selftest.hpp"

namespace fnls::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string config;
  std::string out;
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
  bool dealias = false;
  std::string case_label;
};

constexpr std::size_t kEnsembleSize = 100;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunConfig resolve_config(const std::string& command, const Options& o) {
  RunConfig c;
  if (command == "case") {
    if (o.config.empty()) {
      c = case_config(o.case_label);
    } else {
      json tree = load_config_tree(o.config);
      if (tree.is_object() && tree.contains("case") && tree["case"] != o.case_label) {
        throw ConfigError(o.config + ": config /case: '" + tree["case"].dump() +
                          "' does not match the requested case '" + o.case_label + "'");
      }
      if (tree.is_object()) tree["case"] = o.case_label;
      try {
        c = parse_config(tree);
      } catch (const ConfigError& e) {
        throw ConfigError(o.config + ": " + e.what());
      }
    }
  } else {
    if (o.config.empty()) throw ConfigError("--config is required for '" + command + "'");
    c = load_config(o.config);
  }
  if (o.dealias) c.solver.dealias = true;
  if (!o.out.empty()) c.output_dir = o.out;
  return c;
}

// GNS witness ensemble for the L6 tuple on the run grid, seeded by --seed.
json ensemble_json(const RunConfig& c, std::uint64_t seed) {
  json j{{"seed", seed}, {"samples", kEnsembleSize}};
  if (!(3.0 * c.problem.order.s > 1.0)) {
    j["gns_l6"] = nullptr;
    return j;
  }
  const auto stats = gns_ensemble(c.problem.grid, GNSParams::l6(c.problem.order.s), kEnsembleSize, seed);
  j["gns_l6"] = {{"max_ratio", stats.max_ratio}, {"mean_ratio", stats.mean_ratio},
                 {"degenerate", stats.degenerate}};
  return j;
}

void print_sweep(const SweepResult& r, std::ostream& out) {
  out << r.kind << " " << r.label << ": " << r.runs.size() << " eps values\n";
  for (const auto& run : r.runs) {
    out << "  eps=" << format_double(run.epsilon) << " omega=" << format_double(run.omega)
        << " sup_hs=" << format_double(run.sup_hs);
    if (run.sup_l2_diff) out << " sup_l2_diff=" << format_double(*run.sup_l2_diff);
    if (run.marker) out << " marker=" << format_double(*run.marker);
    out << "\n";
  }
  const auto fit_line = [&](const char* name, const FitOutcome& f) {
    if (f.fit) {
      out << "  " << name << "=" << format_double(f.fit->exponent)
          << " residual=" << format_double(f.fit->residual) << "\n";
    } else if (!f.note.empty()) {
      out << "  " << name << ": " << f.note << "\n";
    }
  };
  fit_line("N_hat", r.moderateness);
  fit_line("k_hat", r.negligibility);
  fit_line("decay_slope", r.decay);
  if (r.monotone) out << "  monotone=" << (*r.monotone ? "true" : "false") << "\n";
  if (r.marker_trend_ok) {
    out << "  marker " << to_string(r.marker) << " trend_ok=" << (*r.marker_trend_ok ? "true" : "false")
        << "\n";
  }
}

int execute(const std::string& command, const Options& o, std::ostream& out, std::ostream& err) {
  if (command == "selftest") {
    const auto checks = run_selftest();
    out << format_selftest(checks);
    return all_passed(checks) ? kExitOk : kExitSelftest;
  }

  const auto start = std::chrono::steady_clock::now();
  OutputManifest manifest;
  manifest.command = command == "case" ? "case " + o.case_label : command;
  manifest.started_utc = utc_now();
  manifest.tool_version = version();

  const RunConfig c = resolve_config(command, o);
  manifest.config = to_json(c);
  const EpsilonNet net = c.epsilon_net();

  std::optional<OutputWriter> writer;
  std::vector<std::string> warnings;
  if (command == "run") {
    if (net.size() != 1) {
      throw ConfigError("config /regularization: run needs a single epsilon (got " +
                        std::to_string(net.size()) + "); use sweep for nets");
    }
    const auto V = regularize(c.problem.V, net[0], net.law(), c.problem.grid);
    const auto g = regularize(c.problem.g, net[0], net.law(), c.problem.grid);
    SolverConfig solver = c.solver;
    solver.order = c.problem.order;
    const RunRecord record = run(solver, initial_field(c.problem), V, g);
    writer.emplace(c.output_dir);
    writer->write_run("", record);
    warnings = record.warnings;
    out << "run " << c.problem.label << ": eps=" << format_double(net[0]) << " steps="
        << solver.total_steps() << " mass_drift=" << format_double(record.relative_mass_drift())
        << " sup_hs=" << format_double(record.sup_hs_norm()) << "\n";
  } else {
    SweepResult result = [&] {
      if (command == "sweep") return run_sweep(c.problem, net, c.solver, o.jobs);
      if (command == "compat") return compatibility_study(c.problem, net, c.solver, o.jobs);
      if (command == "unique") return uniqueness_study(c.problem, c.perturbation, net, c.solver, o.jobs);
      return case_report(case_preset(o.case_label), c.problem, net, c.solver, o.jobs);
    }();
    writer.emplace(c.output_dir);
    writer->write_sweep(result);
    warnings = result.warnings;
    print_sweep(result, out);
  }
  manifest.extra["ensemble"] = ensemble_json(c, o.seed);
  manifest.warnings = warnings;
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  writer->write_manifest(manifest);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  out << "wrote " << writer->files().size() + 1 << " files to " << writer->root().string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudospectral fractional NLS simulator with distributional coefficients", "fnls"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  Options o;
  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("--config", o.config, "Config file (JSON)");
    if (needs_config) cfg->required();
    sub->add_option("--out", o.out, "Output directory (overrides output.dir)");
    sub->add_option("--jobs", o.jobs, "Parallel eps runs (0 = all cores)")->capture_default_str();
    sub->add_option("--seed", o.seed, "Seed of the ensemble diagnostics")->capture_default_str();
    sub->add_flag("--dealias", o.dealias, "2/3-rule dealiasing in every kinetic step");
  };
  add_common(app.add_subcommand("run", "Single regularized run"), true);
  add_common(app.add_subcommand("sweep", "Runs over an eps net with a moderateness fit"), true);
  add_common(app.add_subcommand("compat", "Convergence to the classical solution"), true);
  add_common(app.add_subcommand("unique", "Negligible perturbations and the k_hat fit"), true);
  auto* case_cmd = app.add_subcommand("case", "Preset case with its qualitative marker");
  case_cmd->add_option("label", o.case_label, "case1 | case2 | case3 | case4")->required();
  add_common(case_cmd, false);
  app.add_subcommand("selftest", "Fast invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    return execute(command, o, out, err);
  } catch (const ConfigError& e) {
    err << "fnls: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "fnls: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalBlowup& e) {
    err << "fnls: numerical blowup at step " << e.step() << ": " << e.what() << "\n";
    return kExitBlowup;
  } catch (const IoError& e) {
    err << "fnls: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "fnls: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace fnls::cli
