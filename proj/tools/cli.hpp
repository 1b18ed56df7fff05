#pragma once

#include <iosfwd>

namespace pfsurf {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitValidation = 2, kExitDivergence = 3 };

/// Parses argv and runs one subcommand. Progress goes to `out`, errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfsurf
