#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace toric {

/// Exit codes: 0 pass, 1 quantitative failure, 2 usage or configuration error.
enum ExitCode { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

/// Runs the command line with args[0] as the program name. Data goes to
/// `out` (or to files under --out), diagnostics and verdict lines to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toric
