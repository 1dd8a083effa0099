#pragma once

#include <filesystem>
#include <iosfwd>

#include "semilag/scenario.hpp"

namespace semilag::cli {

/// Each command writes its artifacts under `out` plus a manifest.json and
/// prints a short summary to `log`. Errors propagate as semilag::Error.
void cmd_solve_hj(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
void cmd_solve_system(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
void cmd_convergence_study(const RunConfig& cfg, int levels, const std::filesystem::path& out, std::ostream& log);

/// semilag <solve-hj|solve-system|study> --config PATH [--out DIR] [--seed N] [--levels L]
///
/// Exit codes: 0 success, 1 other numerical failure, 2 configuration or
/// usage error, 3 contraction guard failure.
int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace semilag::cli
