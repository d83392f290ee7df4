#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace shapedecomp::cli {

// Process exit statuses.
enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,    // unexpected exception
  kValidationError = 2,  // bad arguments or input
  kIdentityError = 3,    // an identity check failed
  kNumericalError = 4,
};

// Parses args (args[0] is the program name) and executes one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view data);

}  // namespace shapedecomp::cli
