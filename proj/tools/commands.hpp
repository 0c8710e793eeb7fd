#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace simplicial::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInputError = 2;

// Artifacts keyed by file name, written under the output directory by
// run_cli. Contents depend only on the config, never on the output path.
struct CommandOutput {
  int exit_code = kExitOk;
  std::string summary;  // one line for stdout
  std::map<std::string, std::string> files;
};

// Each command throws ConfigError or a library error for invalid input.
CommandOutput cmd_collapse(const ExperimentConfig& cfg);
CommandOutput cmd_masked_collapse(const ExperimentConfig& cfg);
CommandOutput cmd_lipschitz(const ExperimentConfig& cfg);
CommandOutput cmd_rope_check(const ExperimentConfig& cfg);
CommandOutput cmd_route_stats(const ExperimentConfig& cfg);
CommandOutput cmd_curvature(const ExperimentConfig& cfg);
CommandOutput cmd_reduce_check(const ExperimentConfig& cfg);

// Subcommand names, in help order.
const std::vector<std::string>& command_names();

// Defaults for a subcommand before the config file and flags apply.
ExperimentConfig default_config(const std::string& command);

CommandOutput run_command(const std::string& command, const ExperimentConfig& cfg);

// Output directory: --output flag, else SIMPLICIAL_OUTPUT_DIR, else the
// config's "output" field.
inline constexpr const char* kOutputEnv = "SIMPLICIAL_OUTPUT_DIR";

// args excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simplicial::cli
