#pragma once

#include <ostream>

namespace confstab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitResidualFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs one command and writes its record to `out` (or --out).
/// Diagnostics go to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confstab::cli
