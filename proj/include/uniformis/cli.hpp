#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace uniformis::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,          // bad arguments or malformed input
  kNoConvergence = 2,  // max-iter or stall
  kViolation = 3,      // contract or hypothesis violation, failed check or demo
};

/// Runs one command line (argv[0] is the program name).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same, without the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names accepted by `demo`.
std::vector<std::string> demoNames();

}  // namespace uniformis::cli
