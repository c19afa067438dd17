#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdbary::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

/// Prefix of the environment variables that stand in for flags:
/// --time-limit reads PDBARY_TIME_LIMIT, --threads reads PDBARY_THREADS, ...
/// A flag given on the command line wins over the environment.
inline constexpr const char* kEnvPrefix = "PDBARY_";

/// Runs `pdbary <args...>` (program name excluded). The RunReport JSON goes
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdbary::cli
