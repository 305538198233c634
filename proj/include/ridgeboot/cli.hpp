#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ridgeboot {

/// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitNumerical = 4 };

/// Parses `args` (without the program name) and runs the subcommand.
/// Reports go to the --out file or `out`; failures print one line
/// `error,<kind>,<exit code>,<message>` to `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int parse_and_dispatch(int argc, const char* const* argv);

/// Reads a `key = value` file. Blank lines and lines starting with '#' are
/// skipped; keys may be written with or without the leading dashes.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace ridgeboot
