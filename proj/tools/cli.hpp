#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trafficsym::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kVerified = 0,
  kReplayMismatch = 1,
  kRefuted = 2,
  kInconclusive = 3,
  kPositivity = 4,
  kBackgroundRefuted = 5,
  kUsage = 64,
  kDataError = 65,
  kInternal = 70,
};

/// Runs one command line (without the program name). Everything normally
/// printed goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trafficsym::cli
