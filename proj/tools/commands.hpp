#pragma once

#include <exception>
#include <string>
#include <vector>

#include "shom/config.hpp"

namespace shom::cli {

enum ExitCode : int {
  kOk = 0,
  kGeneric = 1,
  kConfig = 2,
  kResonance = 3,
  kDepth = 4,
  kSolver = 5,
  kThresholds = 6,
};

/// Exit code for an exception escaping a subcommand.
int exit_code_for(const std::exception_ptr& e);

const std::vector<std::string>& subcommands();

/// Runs one subcommand writing into out_dir (created if needed); always
/// writes effective_config.txt and summary.txt. Throws on failure.
int run(const std::string& subcommand, const RunConfig& config, const std::string& out_dir);

/// run() with exceptions mapped to exit codes; a failure summary is
/// written whenever the output directory is usable.
int run_guarded(const std::string& subcommand, const RunConfig& config, const std::string& out_dir,
                std::string* message = nullptr);

}  // namespace shom::cli
