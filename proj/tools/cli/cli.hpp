#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpecpen::cli {

inline constexpr int kExitFeasible = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIterationLimit = 3;

/// Runs one command. args excludes the program name. Machine-readable
/// output goes to out, messages to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace mpecpen::cli
