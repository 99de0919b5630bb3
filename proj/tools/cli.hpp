#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace schoolchoice::cli {

enum ExitCode { kOk = 0, kDomainError = 1, kUsageError = 2 };

// Runs one command line (args excludes the program name) and returns the
// process exit status. All output goes to the given streams unless the
// command writes to --output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schoolchoice::cli
