#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace harmony {

/// Process exit codes.
enum ExitCode : int { exit_ok = 0, exit_mismatch = 2, exit_exhausted = 3, exit_precondition = 4 };

/// Runs the `harmony` command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harmony
