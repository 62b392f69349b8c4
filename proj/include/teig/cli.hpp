#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace teig {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitComplete = 0, kExitUsage = 1, kExitPartial = 2 };

/// Parses args (without the program name), runs the solver and writes the report to out.
/// Diagnostics and the --verbose log go to err.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teig
