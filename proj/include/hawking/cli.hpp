#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hawking {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitInvariant = 3 };

/// Runs one command line (without the program name). Artifacts go to --out
/// when given, otherwise to out; errors are single JSON lines on err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hawking
