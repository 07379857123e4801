#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hwaug::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

/// Runs the command line `hwaug <args...>` (args excludes the program name).
/// Exit codes: 0 success, 1 I/O failure, 2 parse or validation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hwaug::cli
