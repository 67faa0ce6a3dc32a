#pragma once

#include <iosfwd>

namespace kinex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

/// Entry point for the `kinex` tool. Subcommands: simulate, fixedpoint,
/// gfun, verify. Prints a one-line summary to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 on validation errors (bad flags, unknown laws,
/// constraint violations, unwritable output), 2 when a numeric procedure
/// does not converge or a verification check fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kinex::cli
