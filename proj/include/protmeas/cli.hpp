#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace protmeas::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kOk = 0, kRuntime = 1, kUsage = 2, kIo = 3 };

/// Runs `protmeas <args...>` (program name excluded) and returns the exit status.
/// Results go to `out` or to files under --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace protmeas::cli
