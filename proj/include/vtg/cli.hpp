// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vtg::cli {

/// Process exit codes. Stable; scripts depend on them.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidArgs = 2,     // bad flags, unreadable or malformed inputs
    kExitProviderFailure = 3, // backend unreachable or cache miss
    kExitInternal = 4,        // broken runtime invariant
    kExitEvaluation = 5,      // predictions and annotations do not join
};

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vtg::cli
