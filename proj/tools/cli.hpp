#pragma once

#include <iosfwd>

namespace epile::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,        // bad arguments or unparsable input files
    kSolver = 3,       // the model could not be solved (or the case is missing)
    kVerification = 4, // oracle-check discrepancy above tolerance
};

/// Runs one command line; all output goes to out / err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace epile::cli
