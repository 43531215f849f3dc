#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shear {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInput = 2, kExitSolver = 3 };

/// Runs the `shear` command line. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shear
