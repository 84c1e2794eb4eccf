#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace textfield::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kInternalError = 2;

/// Runs the tool on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace textfield::cli
