#pragma once

#include <string>
#include <vector>

namespace mteval {

inline constexpr const char* kToolName = "mteval";
inline constexpr const char* kToolVersion = "0.1.0";

// Entry point of the command line tool. `args` excludes the program name.
// Exit codes: 0 success, 1 parse/validation/usage error, 2 I/O error.
int run(std::vector<std::string> args);

}  // namespace mteval
