#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iondeco::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kNumericFailure = 1, kUsage = 2 };

/**
 * Entry point of the `iondeco` tool.
 *
 * Subcommands: rates, evolve, sweep-bang, sweep-zeno, equivalence, shifts.
 * `--config file.json` loads a flat JSON object whose keys are flag names
 * without the leading dashes; flags given on the command line win.
 */
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iondeco::cli
