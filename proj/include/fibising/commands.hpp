#pragma once

#include <iosfwd>

#include "fibising/config.hpp"

namespace fibising {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfigError = 2,
    kExitNumericError = 3,
};

/// Subcommand bodies. Each computes everything first and then writes its
/// files atomically into config.output_dir. They throw on failure; run_cli
/// maps exceptions to exit codes.
void cmd_bands(const RunConfig& config, std::ostream& log);
void cmd_converge(const RunConfig& config, std::ostream& log);
void cmd_dim(const RunConfig& config, std::ostream& log);
void cmd_oracle(const RunConfig& config, std::ostream& log);
void cmd_orbit(const RunConfig& config, std::ostream& log);
void cmd_surface(const RunConfig& config, std::ostream& log);
/// Returns kExitOk or kExitCheckFailed. `inject_fault` flips the sign of the
/// z term of the trace map to exercise the failure path.
int cmd_check(const RunConfig& config, std::ostream& log, bool inject_fault = false);

/// Largest relative gap between the direct transfer product and the trace
/// recursion over `samples` random parameter points per level 1..k_max.
double transfer_recursion_error(int k_max, int samples, std::uint64_t seed);

/// Parses argv (subcommand, --config FILE, --<key> VALUE overrides) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fibising
