#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ergodograph::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kCapExceeded = 2,
  kParseError = 3,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergodograph::cli
