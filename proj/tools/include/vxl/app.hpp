#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vxl::app {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kNumericalAbort = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out`; failures print {"error", "exit_code"} JSON to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat key=value config file turned into "--key=value" arguments. Blank
/// lines and lines starting with '#' are skipped; a value of "true" gives a
/// bare flag.
std::vector<std::string> config_arguments(const std::string& path);

}  // namespace vxl::app
