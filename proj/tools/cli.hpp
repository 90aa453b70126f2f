#pragma once

#include <iosfwd>

namespace platoon::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,         // malformed file, bad flags or failed validation
  kSafetyViolation = 2,
  kIncomplete = 3,
};

/// Entry point of the `platoon` tool. Diagnostics go to `err`, reports that
/// are not written to files go to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace platoon::cli
