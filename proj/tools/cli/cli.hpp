#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bianchi::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kResource = 3, kConvergence = 4 };

/// Runs one command line (without the program name). Data goes to the
/// requested output file or `out`; reports and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bianchi::cli
