#pragma once

#include <iosfwd>

namespace gaussfit::cli {

enum ExitCode : int {
    kOk = 0,
    kUsageOrParseError = 2,
    kFitError = 3,
    kMissingNoiseLevel = 4,
};

/// Entry point of the `gaussfit` tool; stdout/stderr are injectable for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gaussfit::cli
