#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmps {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `rmps` tool. args[0] is the program name.
/// Returns 0 on success, 1 when an asserted check fails, 2 on usage errors.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmps
