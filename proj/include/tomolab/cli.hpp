#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tomolab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Runs the command line `args` (without the program name). Subcommands:
// tomogram, evolve, check, reconstruct, moments, compare.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tomolab
