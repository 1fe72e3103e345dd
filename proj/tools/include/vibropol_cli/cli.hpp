#pragma once

#include <iosfwd>

namespace vibropol::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kDomainError = 3 };

/// Runs the command line in-process. Reports go to `out`, diagnostics to
/// `err`; the return value is the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vibropol::cli
