#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbepwt::cli {

enum ExitCode : int {
    kOk = 0,
    kRuntimeFailure = 1,
    kUsageError = 2,
    kFormatError = 3,
    kPreconditionViolation = 4,
};

// Runs one `rbepwt` invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbepwt::cli
