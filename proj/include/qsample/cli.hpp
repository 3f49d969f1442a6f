#pragma once

#include <ostream>

namespace qsample {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the `qsample` command line tool. Subcommands: sample, direct,
/// resample, audit, stats, povm, reproduce. Returns 0 on success, 2 for usage and
/// input errors, 3 for numerical failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsample
