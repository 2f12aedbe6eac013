#pragma once

#include <iosfwd>

namespace gegenforge::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_not_converged = 2 };

/// Runs one command line (argv[0] is the program name). Results go to `out`,
/// or to the --out file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gegenforge::cli
