#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spmdiag {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitUsage = 2,
  kExitTraceQuality = 3,
};

/// Entry point of the `spmdiag` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spmdiag
