#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hybrid_jacobi {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNotPrincipal = 1,
  kExitInputError = 2,
  kExitInternal = 3,
};

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybrid_jacobi
