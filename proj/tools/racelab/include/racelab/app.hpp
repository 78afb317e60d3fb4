#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace racelab {

enum ExitCode : int { kSuccess = 0, kComputationFailure = 1, kConfigurationError = 2 };

/// Runs one racelab invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace racelab
