#pragma once

#include <ostream>
#include <span>
#include <string>

namespace ttpsig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the ttpsig tool. args[0] is the program name. Artifacts go
/// to --out or, when it is absent, to `out`; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ttpsig::cli
