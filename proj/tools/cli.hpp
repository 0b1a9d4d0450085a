#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnpbench/csv.hpp"
#include "gnpbench/stats.hpp"

namespace gnp::cli {

// Configuration or usage problems; mapped to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value experiment configuration. Every field except the map path
// has a default.
struct CliConfig {
  std::string map_path;
  VariantKind variant = VariantKind::Proposed;
  int population_size = 100;  // individuals; groups are derived per variant
  int elite_count = 2;
  double crossover_prob = 0.4;
  double mutation_prob = 0.01;
  int tournament_size = 3;
  int program_size = 3;
  int initial_steps = 60;
  int generations = 1000;
  int runs = 30;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = "out";
  FitnessWeights weights;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<VariantKind> variant;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys and
// malformed values are rejected, and `map` must be present.
CliConfig parse_config(const std::string& text);
CliConfig load_config(const std::string& path);
void apply_overrides(const Overrides& overrides, CliConfig& config);

// Population size counts individuals, so per-agent variants get
// population/num_agents groups; the count is then trimmed to keep
// group_count - elite_count even for pairwise breeding.
int derive_group_count(int population_size, GraphAssignment graphs, int num_agents, int elite_count);

ExperimentConfig build_experiment(const CliConfig& config, VariantKind variant, const GridMap& map);

// Exit codes: 0 success, 1 runtime/validation failure, 2 usage/config error.
int cmd_run(const CliConfig& config);
int cmd_compare(const CliConfig& config);
int cmd_curve(const std::vector<std::string>& inputs, const std::optional<std::string>& out_path);
int cmd_search_space(const SearchSpaceParams& params);
int cmd_validate_map(const std::string& path);

// "32/7" or a plain decimal.
double parse_branch_average(const std::string& text);

}  // namespace gnp::cli
