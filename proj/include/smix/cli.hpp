#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smix {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInputError = 2,
  kExitNumericalError = 3,
};

/// Entry point shared by the smix_cli binary and the tests. `args` excludes
/// the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smix
