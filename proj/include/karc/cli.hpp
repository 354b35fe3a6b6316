#pragma once

#include <iosfwd>

namespace karc {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitMathFailure = 1, kExitUsage = 2 };

/// Entry point of `karc`; all output goes to `out` and `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace karc
