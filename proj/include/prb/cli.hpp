#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "prb/config.hpp"
#include "prb/verify.hpp"

namespace prb {

enum class Subcommand { run, verify, inspect };

struct CliInvocation {
  Subcommand subcommand = Subcommand::run;
  std::filesystem::path config_path;
  std::vector<std::string> overrides;  // "section.key=value", applied in order
  std::optional<std::filesystem::path> output_dir;
};

/// Config file, then overrides, then --out, then the PRB_SEED environment
/// variable (replaces the seed list with a single seed).
ExperimentConfig resolve_config(const CliInvocation& inv);

/// Runs every seed and writes run_<seed>.csv plus summary.csv.
int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_verify(const CliInvocation& inv, std::ostream& out, std::ostream& err,
               const GradientFn& grad = gradient);
int cmd_inspect(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and dispatches.
int run_cli(int argc, char** argv);

}  // namespace prb
