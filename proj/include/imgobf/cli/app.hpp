#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imgobf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the imgobf tool. Machine-readable results go to `out`,
/// progress and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imgobf::cli
