#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sopq {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitTolerance = 1,  // compare found a difference above --tol, or selftest failed
    kExitInput = 2,      // bad flags, unreadable or invalid files, domain errors
    kExitNumerical = 3,  // poles, overflow, non-convergence
};

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sopq
