#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace artin::cli {

// Exit codes: 0 success, 1 structured error, 2 usage error.
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace artin::cli
