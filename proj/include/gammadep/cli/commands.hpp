#pragma once
// gammadep test|simulate|oracle-check|population

#include <ostream>

namespace gammadep::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_data = 3, exit_oracle = 4 };

/// Parses argv, runs the subcommand, writes results to `out` (or --output)
/// and diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gammadep::cli
