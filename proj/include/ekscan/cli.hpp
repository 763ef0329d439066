#pragma once

// Command-line front end. Exit status: 0 success, 2 usage, 3 domain,
// 4 resource, 5 audit failure or bound violation, 6 singularity, 1 other.

#include "ekscan/error.hpp"

#include <iosfwd>

namespace ekscan {

enum ExitCode : int {
    kExitOk = 0,
    kExitOther = 1,
    kExitUsage = 2,
    kExitDomain = 3,
    kExitResource = 4,
    kExitAudit = 5,
    kExitSingularity = 6,
};

int exit_code_for(ErrorCategory c);

/// Runs one `ekscan` invocation; output goes to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ekscan
