#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varext::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point shared by the executable and the end-to-end tests. Returns
/// the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varext::cli
