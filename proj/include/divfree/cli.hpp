#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace divfree::cli {

/// Exit codes: 0 success, 2 input or contract error, 3 numerical failure.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_numerical = 3;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divfree::cli
