#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace regretdro::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitValidation = 3,
};

struct CommandOptions {
  bool compare_dro = false;
  /// Overrides the config seed when set.
  std::optional<std::uint64_t> seed;
  /// Caps sweep worker threads; 0 means REGRETDRO_THREADS or the hardware count.
  unsigned threads = 0;
};

/// 17 significant digits, '.' separator, independent of the locale.
std::string format_number(double value);

int cmd_solve(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_sweep(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_validate(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
                 std::ostream& err);
int cmd_compare(const ProblemConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

/// Full command line entry point: parses argv, runs the subcommand and writes
/// the report to --out or to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace regretdro::cli
