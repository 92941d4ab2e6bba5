#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sp21kit {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitContradiction = 2, kExitUsage = 3 };

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sp21kit
