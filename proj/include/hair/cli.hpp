#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hair::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInvalidInput = 3, kComputation = 4 };

// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hair::cli
