#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vvicert {

/// Exit statuses of the command-line tool.
inline constexpr int kExitCertified = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitUsage = 2;

/// Name of the environment variable that overrides the default seed.
inline constexpr const char* kSeedEnvironment = "VVICERT_SEED";

/// Runs one command line (without the program name). The JSON report goes
/// to `out`, or to the --out file with a one-line summary on `out`.
/// Diagnostics go to `err`.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vvicert
