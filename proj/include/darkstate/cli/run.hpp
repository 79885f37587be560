// run.hpp: Dispatch a parsed RunConfig to the solvers

#pragma once

#include <iosfwd>

#include "darkstate/cli/config.hpp"

namespace darkstate::cli {

enum ExitCode : int { EXIT_OK = 0, EXIT_RUNTIME = 1, EXIT_USAGE = 2 };

// Executes one command. Data goes to cfg.out (or `out` when empty), summaries
// and warnings to `out`/`err` as documented per command. Returns EXIT_OK, or
// EXIT_RUNTIME when any sweep cell failed; solver exceptions propagate.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command-line entry point: parse, run, map exceptions to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace darkstate::cli
