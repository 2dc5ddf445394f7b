#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xchain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xchain::cli
