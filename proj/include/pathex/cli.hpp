#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pathex {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitData = 2,
  kExitBackend = 3,
  /// `verify` found a counterexample.
  kExitCheckFailed = 4,
};

/// Runs `pathex <args...>` (program name excluded). Documents go to --out
/// or `out`; help text to `out`; logs and errors to `err`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pathex
