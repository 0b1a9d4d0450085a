#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "gnpbench/tileworld.hpp"

namespace gnp {

enum class OperatorMode { Uniform, Simplified };

// The two independent axes an algorithm variant is made of.
struct Variant {
  GraphAssignment graphs = GraphAssignment::Shared;
  OperatorMode operators = OperatorMode::Uniform;

  friend bool operator==(const Variant&, const Variant&) = default;
};

// The four named combinations.
enum class VariantKind { Gnp, GnpSimplified, Sbgnp, Proposed };

Variant variant_of(VariantKind kind);
const char* variant_name(VariantKind kind);  // gnp, gnp-simplified, sbgnp, proposed
std::optional<VariantKind> variant_from_name(std::string_view name);

struct EvolutionConfig {
  Variant variant;
  int group_count = 0;
  int num_agents = 1;
  int elite_count = 0;
  double crossover_prob = 0.4;
  double mutation_prob = 0.01;
  int tournament_size = 3;
  int generations = 0;
  NodeLibrary library;
  int initial_steps = 60;
  FitnessWeights weights;
  // Re-validate every individual each generation; violations are counted in
  // the run result. Off by default.
  bool validate_each_generation = false;
};

// Empty result means the configuration is usable. `num_agents` must match the
// map the config will run on.
std::vector<std::string> check_config(const EvolutionConfig& config);

// The population unit: one individual per agent under per-agent assignment,
// a single shared individual otherwise. Fitness and transit records are set
// by evaluation and cleared by the variation operators.
struct Group {
  std::vector<Individual> members;
  std::optional<double> fitness;
  std::vector<TransitRecord> transits;
};

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  long long cumulative_evaluations = 0;
};

// group_count groups of fresh random members. Group g draws from the named
// stream (master_seed, kStreamInit, g), so the population is reproducible
// regardless of construction order.
std::vector<Group> init_population(const EvolutionConfig& config, std::uint64_t master_seed);

// Runs every group's episode (in parallel over groups when workers > 1),
// stores fitness and transits, and returns the generation aggregates.
// Results are bit-identical for any worker count.
GenerationStats evaluate_population(std::vector<Group>& population, const GridMap& map,
                                    const EvolutionConfig& config, const GraphShape& shape,
                                    int generation, long long prior_evaluations, int workers);

// tournament_size contestants drawn uniformly with replacement; returns the
// index with the highest fitness, ties to the lowest index.
int tournament_select(const std::vector<Group>& population, int tournament_size, Rng& rng);

// Children start as copies of the parents. Per member slot, each eligible
// branch swaps its target between the children with probability pc. The
// eligible set is every branch in Uniform mode and the union of the parents'
// transited branches in Simplified mode. Slots never mix: slot s of parent 1
// only ever exchanges with slot s of parent 2.
std::pair<Group, Group> crossover(const Group& parent1, const Group& parent2, double pc,
                                  OperatorMode mode, const GraphShape& shape, Rng& rng);

// Per member slot, each eligible branch is redirected with probability pm to
// a target drawn uniformly from all valid targets except its current one.
// Uniform mode ignores `eligible` and uses every branch.
Group mutate(Group group, double pm, OperatorMode mode, const std::vector<TransitRecord>& eligible,
             const GraphShape& shape, Rng& rng);

// Elites copied unchanged, the rest bred in pairs: two tournament parents,
// crossover, then mutation of each child with the eligible set inherited from
// the parents' transits (Simplified mode). All randomness comes from named
// streams keyed by (master_seed, generation, purpose, index).
std::vector<Group> next_generation(const std::vector<Group>& population, const EvolutionConfig& config,
                                   const GraphShape& shape, std::uint64_t master_seed, int generation);

struct EvolveResult {
  std::vector<GenerationStats> stats;  // one entry per evaluated generation
  Group best;                          // best group of the final generation
  EpisodeResult best_episode;
  long long structural_violations = 0;  // only counted when enabled in the config
};

// The full generational loop: initial population, `generations` breeding
// steps with an evaluation before each, and a final evaluation. Deterministic
// in (config, map, master_seed) for every worker count.
EvolveResult evolve(const EvolutionConfig& config, const GridMap& map, std::uint64_t master_seed,
                    int workers = 1);

}  // namespace gnp
