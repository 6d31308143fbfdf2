#pragma once

#include <iosfwd>

namespace mg1 {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitInvalidParameters = 2,
  kExitCorruptData = 3,
};

/// Entry point of the `mg1bayes` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mg1
