#pragma once

#include <string>
#include <vector>

namespace hotv::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kCampaignInvalid = 3,
};

/// Parses argv (argv[0] is the program name) and runs the chosen subcommand.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace hotv::cli
