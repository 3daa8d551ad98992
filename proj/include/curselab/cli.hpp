#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curselab {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitRuntime = 3;

/// Runs one invocation. args excludes the program name. Results go to out
/// (or the --out file), diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parallel degree: OpenMP's default, capped by CURSE_LAB_THREADS if set.
int parallel_degree_from_env();

}  // namespace curselab
