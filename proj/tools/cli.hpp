#pragma once

#include <iosfwd>

namespace fnls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftest = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitInternal = 5;

/// Entry point of the fnls command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fnls::cli
