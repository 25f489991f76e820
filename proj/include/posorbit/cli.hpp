#pragma once

/**
 * @file cli.hpp
 * @brief The posorbit command line, callable in-process.
 *
 * Commands: check FILE, greens FILE [--n N], solve FILE [--x0 X] [--v0 V]
 * [--svg], reproduce {4.1|4.2|4.3|all}. Global flags: --tol, --out DIR,
 * --json. FILE may also name a bundled example (example41.problem, ...).
 * Output files go to --out, else $POSORBIT_OUT_DIR, else the working
 * directory. Reports go to `out`, diagnostics to `err`.
 */

#include <ostream>
#include <string>
#include <vector>

namespace posorbit {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFalse = 1,  ///< certificate not established or a reproduction check failed
  kExitUsage = 2,
  kExitInput = 3,         ///< problem file parse or validation error
  kExitResonance = 4,
  kExitNoConvergence = 5,
  kExitSingularity = 6,   ///< orbit reached the singularity guard or blew up
  kExitIo = 7,
};

inline constexpr const char* kOutDirEnv = "POSORBIT_OUT_DIR";

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posorbit
