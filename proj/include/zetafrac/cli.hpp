#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zetafrac::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInconclusive = 2,
    kIntegrity = 3,
};

// Runs one command line. Records go to `out`, diagnostics and progress to
// `err`. argv[0] is the program name.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace zetafrac::cli
