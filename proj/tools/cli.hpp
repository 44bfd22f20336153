#pragma once

#include <iosfwd>

namespace exo::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,      ///< bad flags or configuration
  kDiverged = 2,   ///< run aborted on a non-finite state
  kViolation = 3,  ///< run finished but a certificate or gain check failed
};

/// Entry point of the exosim tool with injectable streams.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace exo::cli
