#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace povm_domain::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kNumericalError = 2,
  kValidationFailed = 3,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace povm_domain::cli
