#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace selfcontrol::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kSolverFailure = 2,
    kVerificationFailure = 3,
};

/// Runs the command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selfcontrol::cli
