#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semiprov::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kUnexpected = 2;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semiprov::cli
