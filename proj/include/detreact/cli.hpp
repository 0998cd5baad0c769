#pragma once

#include <iosfwd>

namespace detreact::cli {

/// Exit codes of the benchmark runner.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_usage = 2;

/// Runs the benchmark command line. Tables and usage go to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace detreact::cli
