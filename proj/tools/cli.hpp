#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace vtinv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one `vtinv` subcommand. `args` excludes the program name.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace vtinv::cli
