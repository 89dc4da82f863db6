#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fnls {

struct SelftestOptions {
  /// Replaces the wavenumber table of the eigenfunction grid (n = 64);
  /// fault injection for tests of the battery itself.
  std::optional<std::vector<double>> wavenumbers;
};

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Fast invariant battery: plane-wave eigenfunctions, 100-step mass
/// conservation, mollifier mass, synthetic moderateness fit. Deterministic.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

/// One "PASS|FAIL name detail" line per check plus a closing count line.
std::string format_selftest(const std::vector<SelftestCheck>& checks);

bool all_passed(const std::vector<SelftestCheck>& checks);

}  // namespace fnls
