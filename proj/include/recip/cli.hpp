#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace recip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
/// A subcommand ran to completion but one of its verdicts failed.
inline constexpr int kExitCheckFailed = 1;

/// Entry point behind the `recip` executable. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace recip::cli
