#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bnsens {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitValidation = 3,
};

/// Runs the command-line tool. `args` excludes the program name, e.g.
/// {"analyze", "--network", "n.json", ...}. Normal output goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnsens
