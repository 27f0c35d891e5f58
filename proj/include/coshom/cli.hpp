#pragma once

namespace coshom {

/// Entry point for the command-line tool. Parses argv, dispatches to the
/// requested subcommand, and returns the process exit code: 0 on success,
/// 1 for a failed verification, 2 for bad input or usage.
int run_cli(int argc, const char* const* argv);

} // namespace coshom
