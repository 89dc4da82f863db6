#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fnls/dynamics.hpp"
#include "fnls/experiments.hpp"

namespace fnls {

/// Library version string.
std::string version();

/// Shortest decimal that round-trips to the same double ("inf", "nan" for
/// non-finite values).
std::string format_double(double x);

/// "snapshot_t%.6f.csv"
std::string snapshot_filename(double t);

/// "eps_" + eps with 6 significant digits (%.6g).
std::string epsilon_dirname(double eps);

std::string sha256_hex(std::string_view bytes);

inline constexpr std::string_view kDiagnosticsHeader =
    "t,mass,hamiltonian,kinetic,potential,interaction,hs_norm,l4_norm,linf_norm";
inline constexpr std::string_view kSnapshotHeader = "x,re_u,im_u,abs_u";

std::string diagnostics_csv(const RunRecord& record);
std::string snapshot_csv(const Snapshot& snapshot);

/// epsilon,omega,sup_hs[,sup_l2_diff][,marker],N_hat[,k_hat][,decay_slope].
/// Optional columns appear when the study produces them; fit columns repeat
/// the table-level exponent on every row ("inf" for the zero sentinel, empty
/// when no fit was possible).
std::string summary_csv(const SweepResult& result);

/// {N_hat, k_hat, decay_slope, residuals, points, notes, ...}; infinite
/// exponents are written as the string "inf", missing fits as null.
nlohmann::json fits_json(const SweepResult& result);

struct Artifact {
  std::string path;  // relative to the output root, '/' separated
  std::string sha256;
  std::size_t bytes = 0;
};

struct OutputManifest {
  std::string command;
  nlohmann::json config;
  std::vector<Artifact> files;
  std::string tool_version;
  std::string started_utc;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  /// Extra top-level entries (e.g. ensemble diagnostics).
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Writes files under one root and keeps their checksums for the manifest.
/// Failures are IoError. Not thread-safe.
class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  void write(const std::string& relative, std::string_view content);

  /// diagnostics.csv and one snapshot file per snapshot under `dir`.
  void write_run(const std::string& dir, const RunRecord& record);

  /// Per-eps subdirectories, summary.csv and fits.json.
  void write_sweep(const SweepResult& result);

  /// Writes manifest.json listing every file written so far.
  void write_manifest(OutputManifest manifest);

  const std::vector<Artifact>& files() const noexcept { return files_; }

 private:
  std::filesystem::path root_;
  std::vector<Artifact> files_;
};

/// Recomputes every checksum listed in root/manifest.json. Returns the
/// relative paths whose content does not match (missing files included).
std::vector<std::string> verify_manifest(const std::filesystem::path& root);

}  // namespace fnls
