#include "gnpbench/evolution.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace gnp {

Variant variant_of(VariantKind kind) {
  switch (kind) {
    case VariantKind::Gnp: return {GraphAssignment::Shared, OperatorMode::Uniform};
    case VariantKind::GnpSimplified: return {GraphAssignment::Shared, OperatorMode::Simplified};
    case VariantKind::Sbgnp: return {GraphAssignment::PerAgent, OperatorMode::Uniform};
    case VariantKind::Proposed: return {GraphAssignment::PerAgent, OperatorMode::Simplified};
  }
  return {};
}

const char* variant_name(VariantKind kind) {
  switch (kind) {
    case VariantKind::Gnp: return "gnp";
    case VariantKind::GnpSimplified: return "gnp-simplified";
    case VariantKind::Sbgnp: return "sbgnp";
    case VariantKind::Proposed: return "proposed";
  }
  return "?";
}

std::optional<VariantKind> variant_from_name(std::string_view name) {
  if (name == "gnp") return VariantKind::Gnp;
  if (name == "gnp-simplified") return VariantKind::GnpSimplified;
  if (name == "sbgnp") return VariantKind::Sbgnp;
  if (name == "proposed") return VariantKind::Proposed;
  return std::nullopt;
}

std::vector<std::string> check_config(const EvolutionConfig& config) {
  std::vector<std::string> problems = check_library(config.library);
  if (config.group_count < 1) problems.push_back("group_count must be >= 1");
  if (config.num_agents < 1) problems.push_back("num_agents must be >= 1");
  if (config.elite_count < 0 || config.elite_count >= std::max(config.group_count, 1))
    problems.push_back("elite_count must be in [0, group_count)");
  if ((config.group_count - config.elite_count) % 2 != 0)
    problems.push_back("group_count - elite_count must be even (offspring are bred in pairs)");
  if (config.crossover_prob < 0.0 || config.crossover_prob > 1.0)
    problems.push_back("crossover_prob must be in [0,1]");
  if (config.mutation_prob < 0.0 || config.mutation_prob > 1.0)
    problems.push_back("mutation_prob must be in [0,1]");
  if (config.tournament_size < 1 || config.tournament_size > config.group_count)
    problems.push_back("tournament_size must be in [1, group_count]");
  if (config.generations < 0) problems.push_back("generations must be >= 0");
  if (config.initial_steps < 1) problems.push_back("initial_steps must be >= 1");
  return problems;
}

namespace {

int members_per_group(const EvolutionConfig& config) {
  return config.variant.graphs == GraphAssignment::PerAgent ? config.num_agents : 1;
}

void require_valid(const EvolutionConfig& config) {
  if (auto problems = check_config(config); !problems.empty())
    throw std::invalid_argument("invalid evolution config: " + problems.front());
}

}  // namespace

std::vector<Group> init_population(const EvolutionConfig& config, std::uint64_t master_seed) {
  require_valid(config);
  const int members = members_per_group(config);
  std::vector<Group> population(config.group_count);
  for (int g = 0; g < config.group_count; ++g) {
    Rng rng = make_stream(master_seed, kStreamInit, g);
    population[g].members.reserve(members);
    for (int m = 0; m < members; ++m) population[g].members.push_back(random_individual(config.library, rng));
  }
  return population;
}

GenerationStats evaluate_population(std::vector<Group>& population, const GridMap& map,
                                    const EvolutionConfig& config, const GraphShape& shape,
                                    int generation, long long prior_evaluations, int workers) {
  const auto evaluate_range = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      Group& group = population[i];
      EpisodeResult episode =
          run_episode(group.members, config.variant.graphs, map, config.initial_steps, shape);
      group.fitness = fitness(episode, config.weights);
      group.transits = std::move(episode.transits);
    }
  };

  const size_t n = population.size();
  const int nthreads = std::min<int>(std::max(workers, 1), static_cast<int>(n));
  if (nthreads <= 1) {
    evaluate_range(0, n);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    const size_t chunk = (n + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const size_t begin = t * chunk;
      const size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(evaluate_range, begin, end);
    }
    for (auto& th : threads) th.join();
  }

  GenerationStats stats;
  stats.generation = generation;
  stats.cumulative_evaluations = prior_evaluations + static_cast<long long>(n);
  stats.best = population.front().fitness.value();
  double sum = 0.0;
  for (const Group& g : population) {
    const double f = g.fitness.value();
    stats.best = std::max(stats.best, f);
    sum += f;
  }
  stats.mean = sum / static_cast<double>(n);
  return stats;
}

int tournament_select(const std::vector<Group>& population, int tournament_size, Rng& rng) {
  int best = -1;
  for (int k = 0; k < tournament_size; ++k) {
    const int contestant = static_cast<int>(rng.below(static_cast<std::uint32_t>(population.size())));
    if (best < 0 || population[contestant].fitness.value() > population[best].fitness.value() ||
        (population[contestant].fitness.value() == population[best].fitness.value() && contestant < best))
      best = contestant;
  }
  return best;
}

std::pair<Group, Group> crossover(const Group& parent1, const Group& parent2, double pc,
                                  OperatorMode mode, const GraphShape& shape, Rng& rng) {
  if (parent1.members.size() != parent2.members.size())
    throw std::invalid_argument("crossover parents have different member counts");

  Group child1{parent1.members, std::nullopt, {}};
  Group child2{parent2.members, std::nullopt, {}};

  for (size_t s = 0; s < child1.members.size(); ++s) {
    Individual& a = child1.members[s];
    Individual& b = child2.members[s];
    if (a.nodes.size() != b.nodes.size())
      throw std::invalid_argument("crossover parents have different shapes");

    TransitRecord eligible;
    if (mode == OperatorMode::Simplified) {
      if (parent1.transits.size() != parent1.members.size() ||
          parent2.transits.size() != parent2.members.size())
        throw std::invalid_argument("simplified crossover requires evaluated parents");
      eligible = TransitRecord::merged(parent1.transits[s], parent2.transits[s]);
    } else {
      eligible = TransitRecord::full(shape.total_branches());
    }

    for (int flat = 0; flat < shape.total_branches(); ++flat) {
      if (!eligible.contains(flat)) continue;
      if (!rng.bernoulli(pc)) continue;
      const BranchId id = shape.branch_at(flat);
      std::swap(a.nodes[id.node].branches[id.branch].target, b.nodes[id.node].branches[id.branch].target);
    }
  }
  return {std::move(child1), std::move(child2)};
}

Group mutate(Group group, double pm, OperatorMode mode, const std::vector<TransitRecord>& eligible,
             const GraphShape& shape, Rng& rng) {
  group.fitness.reset();
  group.transits.clear();
  const int node_count = shape.node_count();
  for (size_t s = 0; s < group.members.size(); ++s) {
    if (mode == OperatorMode::Simplified && s >= eligible.size())
      throw std::invalid_argument("simplified mutation requires an eligible set per member");
    Individual& ind = group.members[s];
    for (int flat = 0; flat < shape.total_branches(); ++flat) {
      if (mode == OperatorMode::Simplified && !eligible[s].contains(flat)) continue;
      if (!rng.bernoulli(pm)) continue;
      if (node_count <= 2) continue;  // a single target has no alternative
      const BranchId id = shape.branch_at(flat);
      int& target = ind.nodes[id.node].branches[id.branch].target;
      // uniform over the non-start nodes other than the current target
      int pick = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(node_count - 2)));
      if (pick >= target) ++pick;
      target = pick;
    }
  }
  return group;
}

std::vector<Group> next_generation(const std::vector<Group>& population, const EvolutionConfig& config,
                                   const GraphShape& shape, std::uint64_t master_seed, int generation) {
  for (const Group& g : population)
    if (!g.fitness.has_value()) throw std::invalid_argument("next_generation requires an evaluated population");

  std::vector<int> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double fa = population[a].fitness.value();
    const double fb = population[b].fitness.value();
    return fa != fb ? fa > fb : a < b;
  });

  std::vector<Group> next;
  next.reserve(population.size());
  for (int e = 0; e < config.elite_count; ++e) next.push_back(population[order[e]]);

  const int pairs = (config.group_count - config.elite_count) / 2;
  for (int p = 0; p < pairs; ++p) {
    Rng select1 = make_stream(master_seed, kStreamSelect, generation, 2 * p);
    Rng select2 = make_stream(master_seed, kStreamSelect, generation, 2 * p + 1);
    const int i1 = tournament_select(population, config.tournament_size, select1);
    const int i2 = tournament_select(population, config.tournament_size, select2);
    const Group& parent1 = population[i1];
    const Group& parent2 = population[i2];

    Rng xover = make_stream(master_seed, kStreamCrossover, generation, p);
    auto [child1, child2] =
        crossover(parent1, parent2, config.crossover_prob, config.variant.operators, shape, xover);

    std::vector<TransitRecord> eligible;
    if (config.variant.operators == OperatorMode::Simplified) {
      eligible.reserve(parent1.members.size());
      for (size_t s = 0; s < parent1.members.size(); ++s)
        eligible.push_back(TransitRecord::merged(parent1.transits[s], parent2.transits[s]));
    }

    Rng mut1 = make_stream(master_seed, kStreamMutate, generation, 2 * p);
    Rng mut2 = make_stream(master_seed, kStreamMutate, generation, 2 * p + 1);
    next.push_back(mutate(std::move(child1), config.mutation_prob, config.variant.operators, eligible,
                          shape, mut1));
    next.push_back(mutate(std::move(child2), config.mutation_prob, config.variant.operators, eligible,
                          shape, mut2));
  }
  return next;
}

EvolveResult evolve(const EvolutionConfig& config, const GridMap& map, std::uint64_t master_seed,
                    int workers) {
  require_valid(config);
  if (static_cast<int>(map.agents.size()) != config.num_agents)
    throw std::invalid_argument("config expects " + std::to_string(config.num_agents) +
                                " agents but the map has " + std::to_string(map.agents.size()));

  const GraphShape shape(config.library);
  EvolveResult result;
  std::vector<Group> population = init_population(config, master_seed);

  long long evaluations = 0;
  for (int gen = 0; gen <= config.generations; ++gen) {
    const GenerationStats stats =
        evaluate_population(population, map, config, shape, gen, evaluations, workers);
    evaluations = stats.cumulative_evaluations;
    result.stats.push_back(stats);

    if (config.validate_each_generation) {
      for (const Group& g : population)
        for (const Individual& ind : g.members)
          result.structural_violations += static_cast<long long>(validate(ind, config.library).size());
    }

    if (gen < config.generations)
      population = next_generation(population, config, shape, master_seed, gen);
  }

  int best = 0;
  for (size_t i = 1; i < population.size(); ++i)
    if (population[i].fitness.value() > population[best].fitness.value()) best = static_cast<int>(i);
  result.best = population[best];
  result.best_episode =
      run_episode(result.best.members, config.variant.graphs, map, config.initial_steps, shape);
  return result;
}

}  // namespace gnp
