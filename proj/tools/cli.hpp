#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chargeqfi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

// Entry point behind the `chargeqfi` binary. `args` excludes the program
// name. Subcommands: evolve, qfi, sweep, figure, audit.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace chargeqfi::cli
