#pragma once

#include <ostream>

namespace jtcli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;

// Parses flags, runs one config and writes records to out and the human
// summary to err. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jtcli
