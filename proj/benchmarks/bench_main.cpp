#include <benchmark/benchmark.h>

#include "gnpbench/evolution.hpp"
#include "gnpbench/stats.hpp"

namespace {

const char* kBenchMap =
    "............\n"
    ".>..T....H..\n"
    "............\n"
    "....v.......\n"
    "..T....H....\n"
    "............\n"
    ".......<....\n"
    "...T...H....\n"
    "............\n";

gnp::EvolutionConfig bench_config(gnp::VariantKind kind, int groups) {
  gnp::EvolutionConfig config;
  config.variant = gnp::variant_of(kind);
  config.group_count = groups;
  config.num_agents = 3;
  config.elite_count = 2;
  config.generations = 0;
  config.library = gnp::tileworld_library(3);
  config.initial_steps = 60;
  return config;
}

void BM_Advance(benchmark::State& state) {
  const gnp::NodeLibrary lib = gnp::tileworld_library(3);
  const gnp::GraphShape shape(lib);
  gnp::Rng rng(1);
  const gnp::Individual ind = gnp::random_individual(lib, rng);
  gnp::Cursor cursor;
  gnp::TransitRecord record(shape.total_branches());
  gnp::Rng answers(2);
  for (auto _ : state) {
    const int action = gnp::advance(
        ind, shape, cursor, [&answers](int fid) { return static_cast<int>(answers.below(fid <= gnp::kWhatExistBack ? 5 : 4)); },
        record);
    benchmark::DoNotOptimize(action);
  }
}
BENCHMARK(BM_Advance);

void BM_Episode(benchmark::State& state) {
  const gnp::GridMap map = gnp::parse_map(kBenchMap);
  const gnp::NodeLibrary lib = gnp::tileworld_library(3);
  const gnp::GraphShape shape(lib);
  gnp::Rng rng(7);
  std::vector<gnp::Individual> group;
  for (int a = 0; a < 3; ++a) group.push_back(gnp::random_individual(lib, rng));
  for (auto _ : state) {
    const gnp::EpisodeResult result =
        gnp::run_episode(group, gnp::GraphAssignment::PerAgent, map, 60, shape);
    benchmark::DoNotOptimize(result.dropped);
  }
}
BENCHMARK(BM_Episode);

void BM_Generation(benchmark::State& state) {
  const gnp::GridMap map = gnp::parse_map(kBenchMap);
  const auto kind = static_cast<gnp::VariantKind>(state.range(0));
  gnp::EvolutionConfig config = bench_config(kind, 32);
  const gnp::GraphShape shape(config.library);
  auto population = gnp::init_population(config, 11);
  long long evals = 0;
  int generation = 0;
  for (auto _ : state) {
    const auto stats =
        gnp::evaluate_population(population, map, config, shape, generation, evals, 1);
    evals = stats.cumulative_evaluations;
    population = gnp::next_generation(population, config, shape, 11, generation++);
  }
}
BENCHMARK(BM_Generation)->Arg(static_cast<int>(gnp::VariantKind::Gnp))
    ->Arg(static_cast<int>(gnp::VariantKind::Proposed));

void BM_WelchTTest(benchmark::State& state) {
  gnp::Rng rng(5);
  std::vector<double> a, b;
  for (int i = 0; i < 30; ++i) {
    a.push_back(rng.next_double() * 100);
    b.push_back(rng.next_double() * 100);
  }
  for (auto _ : state) {
    const auto r = gnp::welch_t_test(a, b);
    benchmark::DoNotOptimize(r.p);
  }
}
BENCHMARK(BM_WelchTTest);

}  // namespace

BENCHMARK_MAIN();
