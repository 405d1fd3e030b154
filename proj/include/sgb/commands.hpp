#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sgb {

/// Exit codes of the command runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the `sgb` tool; `args` excludes the program name.
///
///   sgb <command> [--config FILE] [--workers N] [--timing] [--<key> VALUE ...]
///
/// Commands: check-assumptions, simulate, bismut, coupling, inequalities,
/// accept, sample-longrun. Results go to <output_dir>/<command>.jsonl and
/// <output_dir>/<command>.csv.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgb
