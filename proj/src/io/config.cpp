#include "fnls/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fnls/error.hpp"

namespace fnls {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ConfigError("config " + (path.empty() ? std::string("/") : path) + ": " + why);
}

// Read-only view of one object with its key path; rejects unknown keys.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  void only(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(path_ + "/" + key, "unknown key");
      }
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return path_ + "/" + key; }
  const json& raw(const std::string& key) const { return j_.at(key); }

  Node child(const std::string& key) const { return Node(j_.at(key), at(key)); }

  double number(const std::string& key) const {
    if (!has(key)) fail(at(key), "missing required key");
    return as_number(j_.at(key), at(key));
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key) const {
    if (!has(key)) fail(at(key), "missing required key");
    const auto& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(at(key), "expected a nonnegative integer");
    }
    return v.get<std::size_t>();
  }
  std::size_t count(const std::string& key, std::size_t fallback) const {
    return has(key) ? count(key) : fallback;
  }

  std::string text(const std::string& key) const {
    if (!has(key)) fail(at(key), "missing required key");
    if (!j_.at(key).is_string()) fail(at(key), "expected a string");
    return j_.at(key).get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) fail(at(key), "expected true or false");
    return j_.at(key).get<bool>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto& v = j_.at(key);
    if (!v.is_array()) fail(at(key), "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], at(key) + "/" + std::to_string(i)));
    }
    return out;
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
  }

 private:
  const json& j_;
  std::string path_;
};

// Runs a constructor or validator, turning domain failures into config errors.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    fail(path, e.what());
  } catch (const StructuralError& e) {
    fail(path, e.what());
  }
}

CoefficientTerm parse_term(const json& j, const std::string& path, double length) {
  const Node n(j, path);
  const std::string type = n.text("type");
  if (type == "constant") {
    n.only({"type", "value"});
    const double a = n.number("value");
    if (a < 0.0) fail(n.at("value"), "coefficient constants must be nonnegative");
    return Constant{a};
  }
  if (type == "sin2") {
    n.only({"type", "offset", "amplitude", "waves"});
    return guarded(path, [&] {
      return SmoothProfile::sin2(n.number("offset"), n.number("amplitude"), n.number("waves"),
                                 length);
    });
  }
  if (type == "gaussian") {
    n.only({"type", "amplitude", "center", "width"});
    return guarded(path, [&] {
      return SmoothProfile::gaussian(n.number("amplitude"), n.number("center"), n.number("width"),
                                     length);
    });
  }
  if (type == "delta") {
    n.only({"type", "x0", "strength"});
    return Delta{n.number("x0"), n.number("strength", 1.0)};
  }
  if (type == "delta_power") {
    n.only({"type", "x0", "k", "strength"});
    const double k = n.number("k");
    if (k != std::floor(k) || k < 1.0 || k > 64.0) fail(n.at("k"), "expected an integer in [1, 64]");
    return DeltaPower{n.number("x0"), static_cast<int>(k), n.number("strength", 1.0)};
  }
  fail(n.at("type"), "unknown term type '" + type +
                         "' (expected constant, sin2, gaussian, delta, delta_power)");
}

CoefficientSpec parse_spec(const json& j, const std::string& path, const Grid& grid) {
  if (!j.is_array()) fail(path, "expected a list of terms");
  CoefficientSpec spec;
  for (std::size_t i = 0; i < j.size(); ++i) {
    spec.add(parse_term(j[i], path + "/" + std::to_string(i), grid.length()));
  }
  guarded(path, [&] {
    validate(spec, grid);
    return 0;
  });
  return spec;
}

json smooth_to_json(const SmoothProfile& p) {
  if (p.kind != "sin2" && p.kind != "gaussian") {
    throw ConfigError("profile '" + p.kind + "' has no serialized form");
  }
  json t{{"type", p.kind}};
  for (const auto& [key, value] : p.params) t[key] = value;
  return t;
}

json term_to_json(const CoefficientTerm& term) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return json{{"type", "constant"}, {"value", c.value}}; },
          [](const SmoothProfile& p) { return smooth_to_json(p); },
          [](const Delta& d) { return json{{"type", "delta"}, {"x0", d.x0}, {"strength", d.strength}}; },
          [](const DeltaPower& d) {
            return json{{"type", "delta_power"}, {"x0", d.x0}, {"k", d.k}, {"strength", d.strength}};
          },
      },
      term);
}

Integrator parse_integrator(const std::string& name, const std::string& path) {
  if (name == "strang") return Integrator::strang;
  if (name == "lie") return Integrator::lie;
  fail(path, "unknown integrator '" + name + "' (expected strang or lie)");
}

template <class F>
auto config_guard(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return guarded(path, std::forward<F>(f));
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind("config ", 0) == 0) throw;
    fail(path, what);
  }
}

}  // namespace

RunConfig case_config(std::string_view label) {
  const CasePreset preset = case_preset(label);
  RunConfig c;
  c.case_label = preset.label;
  c.problem = case_problem(preset);
  c.solver = case_solver_config();
  c.net = preset.default_net;
  return c;
}

RunConfig parse_config(const json& tree) {
  const Node root(tree, "");
  root.only({"case", "grid", "order", "time", "coefficients", "initial", "regularization",
             "perturbation", "output"});

  std::optional<RunConfig> base;
  if (root.has("case")) {
    const std::string label = root.text("case");
    base = config_guard(root.at("case"), [&] { return case_config(label); });
  }
  RunConfig c = base ? *base : RunConfig{};
  if (!base) c.problem.label = "custom";
  if (!base) {
    for (const char* key : {"grid", "time", "coefficients"}) {
      if (!root.has(key)) fail(root.at(key), "missing required key (or set 'case')");
    }
  }

  if (root.has("grid")) {
    const Node g = root.child("grid");
    g.only({"L", "n"});
    const double L = g.number("L", c.problem.grid.length());
    const std::size_t n = g.count("n", c.problem.grid.size());
    if (!(L > 0.0)) fail(g.at("L"), "must be positive");
    if (n < 8 || !is_power_of_two(n)) fail(g.at("n"), "must be a power of two >= 8");
    c.problem.grid = Grid(L, n);
  }
  const Grid& grid = c.problem.grid;

  if (root.has("order")) {
    const Node o = root.child("order");
    o.only({"s"});
    const double s = o.number("s");
    c.problem.order = config_guard(o.at("s"), [&] { return FractionalOrder(s); });
  }
  c.solver.order = c.problem.order;

  if (root.has("time")) {
    const Node t = root.child("time");
    t.only({"T", "dt", "snapshot_times", "diag_stride", "integrator", "dealias",
            "allow_phase_wrap"});
    c.solver.final_time = base ? t.number("T", c.solver.final_time) : t.number("T");
    c.solver.dt = base ? t.number("dt", c.solver.dt) : t.number("dt");
    if (t.has("snapshot_times")) {
      c.solver.snapshot_times = t.numbers("snapshot_times");
    } else if (!base || t.has("T")) {
      c.solver.snapshot_times = {c.solver.final_time};
    }
    c.solver.diag_stride = t.count("diag_stride", c.solver.diag_stride);
    if (t.has("integrator")) {
      c.solver.integrator = parse_integrator(t.text("integrator"), t.at("integrator"));
    }
    c.solver.dealias = t.flag("dealias", c.solver.dealias);
    c.solver.allow_phase_wrap = t.flag("allow_phase_wrap", c.solver.allow_phase_wrap);
  }
  config_guard("/time", [&] {
    c.solver.validate(grid);
    return 0;
  });

  if (root.has("coefficients")) {
    const Node k = root.child("coefficients");
    k.only({"V", "g"});
    if (!base && (!k.has("V") || !k.has("g"))) fail(k.at(k.has("V") ? "g" : "V"), "missing required key");
    if (k.has("V")) c.problem.V = parse_spec(k.raw("V"), k.at("V"), grid);
    if (k.has("g")) c.problem.g = parse_spec(k.raw("g"), k.at("g"), grid);
  } else {
    // Preset coefficients against a possibly changed grid.
    parse_spec(coefficient_to_json(c.problem.V), "/coefficients/V", grid);
    parse_spec(coefficient_to_json(c.problem.g), "/coefficients/g", grid);
  }

  if (root.has("initial")) {
    const Node i = root.child("initial");
    i.only({"preset", "profile"});
    if (i.has("preset") == i.has("profile")) fail(i.at("preset"), "give exactly one of preset, profile");
    if (i.has("preset")) {
      const std::string name = i.text("preset");
      c.problem.initial = config_guard(i.at("preset"), [&] { return parse_initial_profile(name); });
      c.problem.initial_profile.reset();
    } else {
      auto term = parse_term(i.raw("profile"), i.at("profile"), grid.length());
      if (!std::holds_alternative<SmoothProfile>(term)) {
        fail(i.at("profile"), "initial profile must be sin2 or gaussian");
      }
      c.problem.initial_profile = std::get<SmoothProfile>(std::move(term));
    }
  }

  if (root.has("regularization")) {
    const Node r = root.child("regularization");
    r.only({"epsilon", "net", "geometric", "scaling"});
    if (r.has("scaling")) {
      const Node s = r.child("scaling");
      s.only({"kind", "N0"});
      const std::string kind = s.text("kind");
      if (kind == "power") {
        if (s.has("N0")) fail(s.at("N0"), "only the log law takes N0");
        c.law = ScalingLaw::power();
      } else if (kind == "log") {
        const double n0 = s.number("N0");
        c.law = config_guard(s.at("N0"), [&] { return ScalingLaw::logarithmic(n0); });
      } else {
        fail(s.at("kind"), "unknown scaling '" + kind + "' (expected power or log)");
      }
    }
    const int given = int(r.has("epsilon")) + int(r.has("net")) + int(r.has("geometric"));
    if (given > 1) fail(r.at("epsilon"), "give at most one of epsilon, net, geometric");
    if (!base && given == 0) fail(r.at("net"), "missing epsilon, net or geometric");
    if (r.has("epsilon")) c.net = {r.number("epsilon")};
    if (r.has("net")) c.net = r.numbers("net");
    if (r.has("geometric")) {
      const Node g = r.child("geometric");
      g.only({"first", "ratio", "count"});
      const double first = g.number("first");
      const double ratio = g.number("ratio");
      const std::size_t count = g.count("count");
      c.net = config_guard(r.at("geometric"),
                           [&] { return EpsilonNet::geometric(first, ratio, count, c.law).values(); });
    }
  } else if (!base) {
    fail("/regularization", "missing required key (or set 'case')");
  }
  config_guard("/regularization", [&] { return c.epsilon_net(); });

  if (root.has("perturbation")) {
    const Node p = root.child("perturbation");
    p.only({"target", "k", "amplitude", "center", "width"});
    Perturbation& q = c.perturbation;
    if (p.has("target")) {
      const std::string name = p.text("target");
      q.target = config_guard(p.at("target"), [&] { return parse_perturbation_target(name); });
    }
    q.k = p.number("k", q.k);
    q.amplitude = p.number("amplitude", q.amplitude);
    q.center = p.number("center", q.center);
    q.width = p.number("width", q.width);
    if (!(q.k > 0.0)) fail(p.at("k"), "must be positive");
    if (q.amplitude < 0.0) fail(p.at("amplitude"), "must be nonnegative");
    if (!(q.width > 0.0)) fail(p.at("width"), "must be positive");
  }

  if (root.has("output")) {
    const Node o = root.child("output");
    o.only({"dir", "formats"});
    c.output_dir = o.text("dir", c.output_dir);
    if (c.output_dir.empty()) fail(o.at("dir"), "must not be empty");
    if (o.has("formats")) {
      const auto& f = o.raw("formats");
      if (!f.is_array()) fail(o.at("formats"), "expected a list of strings");
      c.formats.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string path = o.at("formats") + "/" + std::to_string(i);
        if (!f[i].is_string() || f[i].get<std::string>() != "csv") {
          fail(path, "unsupported format (only csv)");
        }
        c.formats.push_back("csv");
      }
    }
  }
  if (c.case_label) c.problem.label = *c.case_label;
  return c;
}

namespace {

json parse_tree(std::string_view text, const std::string& source) {
  try {
    return json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

RunConfig parse_named(const json& tree, const std::string& source) {
  try {
    return parse_config(tree);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::string& source) {
  return parse_named(parse_tree(text, source), source);
}

json load_config_tree(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_tree(text.str(), path.string());
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_named(load_config_tree(path), path.string());
}

json coefficient_to_json(const CoefficientSpec& spec) {
  json out = json::array();
  for (const auto& term : spec.terms()) out.push_back(term_to_json(term));
  return out;
}

json to_json(const RunConfig& c) {
  json j;
  if (c.case_label) j["case"] = *c.case_label;
  j["grid"] = {{"L", c.problem.grid.length()}, {"n", c.problem.grid.size()}};
  j["order"] = {{"s", c.problem.order.s}};
  j["time"] = {{"T", c.solver.final_time},
               {"dt", c.solver.dt},
               {"snapshot_times", c.solver.snapshot_times},
               {"diag_stride", c.solver.diag_stride},
               {"integrator", c.solver.integrator == Integrator::strang ? "strang" : "lie"},
               {"dealias", c.solver.dealias},
               {"allow_phase_wrap", c.solver.allow_phase_wrap}};
  j["coefficients"] = {{"V", coefficient_to_json(c.problem.V)}, {"g", coefficient_to_json(c.problem.g)}};
  if (c.problem.initial_profile) {
    j["initial"] = {{"profile", smooth_to_json(*c.problem.initial_profile)}};
  } else {
    j["initial"] = {{"preset", to_string(c.problem.initial)}};
  }
  json scaling{{"kind", c.law.kind() == ScalingLaw::Kind::power ? "power" : "log"}};
  if (c.law.kind() == ScalingLaw::Kind::log) scaling["N0"] = c.law.n0();
  j["regularization"] = {{"net", c.net}, {"scaling", scaling}};
  const auto& p = c.perturbation;
  j["perturbation"] = {{"target", to_string(p.target)},
                       {"k", p.k},
                       {"amplitude", p.amplitude},
                       {"center", p.center},
                       {"width", p.width}};
  j["output"] = {{"dir", c.output_dir}, {"formats", c.formats}};
  return j;
}

bool equivalent(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

}  // namespace fnls
