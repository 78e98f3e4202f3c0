#pragma once

#include <iosfwd>

namespace rpsf {

// Exit codes of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitHaram = 3;
inline constexpr int kExitUndecided = 4;
inline constexpr int kExitNotEquivalent = 5;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rpsf
