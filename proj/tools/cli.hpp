#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace densagg::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,  // malformed input, failed class check, precondition gate
  kCheckFailed = 2,      // some audit or experiment row has pass = false
  kInternalError = 3,
};

/// Parses `args` (args[0] is the program name) and runs one subcommand.
/// Diagnostics go to `err`; results are written to files only.
int dispatch(const std::vector<std::string>& args, std::ostream& err);

}  // namespace densagg::cli
