#pragma once

#include <ostream>

namespace expo_surf::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kAccuracyError = 3,
  kResourceError = 4,
};

/// Parses arguments, runs one command and returns its exit code. Normal
/// output goes to `out` unless redirected to a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace expo_surf::cli
