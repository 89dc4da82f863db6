#include "fnls/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fnls/error.hpp"

#ifndef FNLS_VERSION
#define FNLS_VERSION "0.0.0"
#endif

namespace fnls {

using nlohmann::json;

namespace {

json exponent_json(const FitOutcome& f) {
  if (!f.fit) return nullptr;
  if (f.fit->is_infinite()) return "inf";
  return f.fit->exponent;
}

std::string exponent_cell(const FitOutcome& f) {
  if (!f.fit) return "";
  return format_double(f.fit->exponent);
}

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

std::string version() { return FNLS_VERSION; }

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), r.ptr);
}

std::string snapshot_filename(double t) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "snapshot_t%.6f.csv", t);
  return buf.data();
}

std::string epsilon_dirname(double eps) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "eps_%.6g", eps);
  return buf.data();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string diagnostics_csv(const RunRecord& r) {
  std::string out(kDiagnosticsHeader);
  out += '\n';
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& e = r.energy[i];
    append_row(out, {format_double(r.times[i]), format_double(r.mass[i]), format_double(e.total),
                     format_double(e.kinetic), format_double(e.potential),
                     format_double(e.interaction), format_double(r.hs_norm[i]),
                     format_double(r.l4_norm[i]), format_double(r.linf_norm[i])});
  }
  return out;
}

std::string snapshot_csv(const Snapshot& s) {
  std::string out(kSnapshotHeader);
  out += '\n';
  const Grid& g = s.field.grid();
  for (std::size_t j = 0; j < s.field.size(); ++j) {
    const cplx u = s.field[j];
    append_row(out, {format_double(g.x(j)), format_double(u.real()), format_double(u.imag()),
                     format_double(std::abs(u))});
  }
  return out;
}

std::string summary_csv(const SweepResult& r) {
  bool has_diff = false;
  bool has_marker = false;
  for (const auto& run : r.runs) {
    has_diff = has_diff || run.sup_l2_diff.has_value();
    has_marker = has_marker || run.marker.has_value();
  }
  const bool has_k = r.kind == "unique";
  const bool has_decay = r.kind == "compat";

  std::string out = "epsilon,omega,sup_hs";
  if (has_diff) out += ",sup_l2_diff";
  if (has_marker) out += ",marker";
  out += ",N_hat";
  if (has_k) out += ",k_hat";
  if (has_decay) out += ",decay_slope";
  out += '\n';

  const auto optional_cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& run : r.runs) {
    out += format_double(run.epsilon) + ',' + format_double(run.omega) + ',' +
           format_double(run.sup_hs);
    if (has_diff) out += ',' + optional_cell(run.sup_l2_diff);
    if (has_marker) out += ',' + optional_cell(run.marker);
    out += ',' + exponent_cell(r.moderateness);
    if (has_k) out += ',' + exponent_cell(r.negligibility);
    if (has_decay) out += ',' + exponent_cell(r.decay);
    out += '\n';
  }
  return out;
}

json fits_json(const SweepResult& r) {
  json residuals = json::object();
  json points = json::object();
  json notes = json::object();
  const auto add = [&](const char* name, const FitOutcome& f) {
    if (f.fit) {
      residuals[name] = f.fit->residual;
      points[name] = f.fit->points;
    } else if (!f.note.empty()) {
      notes[name] = f.note;
    }
  };
  add("N_hat", r.moderateness);
  add("k_hat", r.negligibility);
  add("decay_slope", r.decay);

  json j{{"label", r.label},
         {"kind", r.kind},
         {"N_hat", exponent_json(r.moderateness)},
         {"k_hat", exponent_json(r.negligibility)},
         {"decay_slope", exponent_json(r.decay)},
         {"residuals", residuals},
         {"points", points},
         {"notes", notes},
         {"marker", to_string(r.marker)}};
  j["marker_trend_ok"] = r.marker_trend_ok ? json(*r.marker_trend_ok) : json(nullptr);
  j["monotone"] = r.monotone ? json(*r.monotone) : json(nullptr);
  json params = json::object();
  for (const auto& [key, value] : r.parameters) params[key] = value;
  j["parameters"] = params;
  return j;
}

json OutputManifest::to_json() const {
  json list = json::array();
  for (const auto& f : files) {
    list.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  json j{{"command", command},       {"config", config},
         {"files", list},            {"tool_version", tool_version},
         {"started_utc", started_utc}, {"wall_seconds", wall_seconds},
         {"warnings", warnings}};
  for (const auto& [key, value] : extra.items()) j[key] = value;
  return j;
}

OutputWriter::OutputWriter(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec || !std::filesystem::is_directory(root_)) {
    throw IoError("cannot create output directory '" + root_.string() + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

void OutputWriter::write(const std::string& relative, std::string_view content) {
  const auto path = root_ / relative;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
  files_.push_back(Artifact{relative, sha256_hex(content), content.size()});
}

void OutputWriter::write_run(const std::string& dir, const RunRecord& record) {
  const std::string prefix = dir.empty() ? std::string() : dir + "/";
  write(prefix + "diagnostics.csv", diagnostics_csv(record));
  for (const auto& s : record.snapshots) {
    write(prefix + snapshot_filename(s.requested_time), snapshot_csv(s));
  }
}

void OutputWriter::write_sweep(const SweepResult& result) {
  for (const auto& run : result.runs) write_run(epsilon_dirname(run.epsilon), run.record);
  write("summary.csv", summary_csv(result));
  write("fits.json", fits_json(result).dump(2) + "\n");
}

void OutputWriter::write_manifest(OutputManifest manifest) {
  manifest.files = files_;
  const std::string text = manifest.to_json().dump(2) + "\n";
  const auto path = root_ / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::string> verify_manifest(const std::filesystem::path& root) {
  json manifest;
  try {
    manifest = json::parse(read_file(root / "manifest.json"));
  } catch (const json::exception& e) {
    throw IoError("manifest.json is not valid JSON: " + std::string(e.what()));
  }
  std::vector<std::string> bad;
  for (const auto& f : manifest.at("files")) {
    const std::string rel = f.at("path").get<std::string>();
    try {
      if (sha256_hex(read_file(root / rel)) != f.at("sha256").get<std::string>()) bad.push_back(rel);
    } catch (const IoError&) {
      bad.push_back(rel);
    }
  }
  return bad;
}

}  // namespace fnls
