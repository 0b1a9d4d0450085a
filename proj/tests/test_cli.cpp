#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"

using namespace gnp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("gnpbench_test_" + tag + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ExecResult {
  int code = -1;
  std::string output;
};

ExecResult exec(const std::string& command) {
  ExecResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[512];
  while (fgets(buffer, sizeof(buffer), pipe) != nullptr) result.output += buffer;
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

const char* kTinyMap = ">..T.H..\n........\nv..T.H..\n";

std::string tiny_config_text(const fs::path& map_path, const fs::path& out_dir) {
  return "# test configuration\n"
         "map = " + map_path.string() + "\n"
         "variant = gnp\n"
         "population_size = 12\n"
         "elite_count = 2\n"
         "generations = 5\n"
         "initial_steps = 12\n"
         "program_size = 2\n"
         "runs = 2\n"
         "seed = 5\n"
         "out_dir = " + out_dir.string() + "\n";
}

}  // namespace

TEST_CASE("config parsing fills Tileworld defaults") {
  const cli::CliConfig config = cli::parse_config("map = some.map\n");
  CHECK(config.map_path == "some.map");
  CHECK(config.variant == VariantKind::Proposed);
  CHECK(config.population_size == 100);
  CHECK(config.elite_count == 2);
  CHECK(config.crossover_prob == 0.4);
  CHECK(config.mutation_prob == 0.01);
  CHECK(config.program_size == 3);
  CHECK(config.initial_steps == 60);
  CHECK(config.generations == 1000);
  CHECK(config.tournament_size == 3);
  CHECK(config.runs == 30);
  CHECK(config.seed == 1);
  CHECK(config.workers == 1);
  CHECK(config.out_dir == "out");
  CHECK(config.weights.w1 == 100.0);
  CHECK(config.weights.w2 == 1.0);
  CHECK(config.weights.w3 == 20.0);
}

TEST_CASE("config parsing handles comments, spacing and overrides") {
  const cli::CliConfig config = cli::parse_config(
      "  map=maps/env_a.map   # inline comment\n"
      "\n"
      "# a full comment line\n"
      "variant = sbgnp\n"
      "crossover_prob=0.25\n"
      "seed = 123456789012345\n");
  CHECK(config.map_path == "maps/env_a.map");
  CHECK(config.variant == VariantKind::Sbgnp);
  CHECK(config.crossover_prob == 0.25);
  CHECK(config.seed == 123456789012345ull);
}

TEST_CASE("config parsing rejects bad input") {
  CHECK_THROWS_WITH_AS(cli::parse_config(""), "missing key: map", cli::ConfigError);
  CHECK_THROWS_WITH_AS(cli::parse_config("variant = gnp\n"), "missing key: map", cli::ConfigError);
  CHECK_THROWS_WITH_AS(cli::parse_config("map = m\nbogus = 3\n"), "unknown key: bogus",
                       cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("map = m\ngenerations = many\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("map = m\nvariant = blah\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("map m\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("map = m\nruns = 0\n"), cli::ConfigError);
}

TEST_CASE("group counts follow the population size and stay pair-breedable") {
  CHECK(cli::derive_group_count(100, GraphAssignment::Shared, 3, 2) == 100);
  CHECK(cli::derive_group_count(100, GraphAssignment::PerAgent, 3, 2) == 32);  // 33 trimmed
  CHECK(cli::derive_group_count(100, GraphAssignment::PerAgent, 2, 2) == 50);
  CHECK(cli::derive_group_count(20, GraphAssignment::Shared, 3, 2) == 20);
  CHECK(cli::derive_group_count(99, GraphAssignment::Shared, 1, 2) == 98);
  CHECK_THROWS_AS(cli::derive_group_count(2, GraphAssignment::PerAgent, 3, 2), cli::ConfigError);
}

TEST_CASE("build_experiment derives agent count and group count from the map") {
  const GridMap map = parse_map(kTinyMap);
  cli::CliConfig config = cli::parse_config("map = unused\npopulation_size = 100\n");
  const ExperimentConfig shared = cli::build_experiment(config, VariantKind::Gnp, map);
  CHECK(shared.evolution.group_count == 100);
  CHECK(shared.evolution.num_agents == 2);
  const ExperimentConfig per_agent = cli::build_experiment(config, VariantKind::Proposed, map);
  CHECK(per_agent.evolution.group_count == 50);
  CHECK(per_agent.evolution.variant.graphs == GraphAssignment::PerAgent);
}

TEST_CASE("cmd_run writes runs.csv, curve.csv and the best programs") {
  const fs::path dir = fresh_dir("run");
  write_text(dir / "tiny.map", kTinyMap);
  const fs::path out_dir = dir / "out";
  const cli::CliConfig config = cli::parse_config(tiny_config_text(dir / "tiny.map", out_dir));

  CHECK(cli::cmd_run(config) == 0);
  CHECK(fs::exists(out_dir / "runs.csv"));
  CHECK(fs::exists(out_dir / "curve.csv"));
  CHECK(fs::exists(out_dir / "best_0.txt"));

  const std::string runs = slurp(out_dir / "runs.csv");
  CHECK(runs.substr(0, 28) == "run,seed,final_best,success\n");
  CHECK(std::count(runs.begin(), runs.end(), '\n') == 3);  // header + 2 runs

  // the dumped program parses back
  const Individual best = individual_from_text(slurp(out_dir / "best_0.txt"));
  CHECK(validate(best, tileworld_library(2)).empty());
}

TEST_CASE("cmd_run output is byte-identical for equal seeds and any worker count") {
  const fs::path dir = fresh_dir("determinism");
  write_text(dir / "tiny.map", kTinyMap);
  cli::CliConfig config = cli::parse_config(tiny_config_text(dir / "tiny.map", dir / "out1"));
  CHECK(cli::cmd_run(config) == 0);

  config.out_dir = (dir / "out2").string();
  config.workers = 4;
  CHECK(cli::cmd_run(config) == 0);

  CHECK(slurp(dir / "out1" / "runs.csv") == slurp(dir / "out2" / "runs.csv"));
  CHECK(slurp(dir / "out1" / "curve.csv") == slurp(dir / "out2" / "curve.csv"));
  CHECK(slurp(dir / "out1" / "best_0.txt") == slurp(dir / "out2" / "best_0.txt"));
}

TEST_CASE("cmd_run rejects a missing map file") {
  const fs::path dir = fresh_dir("nomap");
  const cli::CliConfig config =
      cli::parse_config("map = " + (dir / "absent.map").string() + "\nruns = 2\ngenerations = 1\n");
  CHECK_THROWS(cli::cmd_run(config));
}

TEST_CASE("cmd_compare writes four ranked rows with p-values against the proposed variant") {
  const fs::path dir = fresh_dir("compare");
  write_text(dir / "tiny.map", kTinyMap);
  const fs::path out_dir = dir / "out";
  cli::CliConfig config = cli::parse_config(tiny_config_text(dir / "tiny.map", out_dir));
  config.runs = 3;
  config.generations = 4;
  config.workers = 2;

  CHECK(cli::cmd_compare(config) == 0);
  const std::string compare = slurp(out_dir / "compare.csv");
  std::istringstream in(compare);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "algorithm,rank,mean,std,successes,p_value_vs_proposed");

  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].substr(0, 4) == "gnp,");
  CHECK(rows[1].substr(0, 15) == "gnp-simplified,");
  CHECK(rows[2].substr(0, 6) == "sbgnp,");
  CHECK(rows[3].substr(0, 9) == "proposed,");
  CHECK(rows[3].back() == ',');  // empty p-value cell for the proposed row

  std::set<char> ranks;
  for (const auto& row : rows) ranks.insert(row[row.find(',') + 1]);
  CHECK(ranks == std::set<char>{'1', '2', '3', '4'});

  const std::string first = slurp(out_dir / "compare.csv");
  CHECK(cli::cmd_compare(config) == 0);
  CHECK(slurp(out_dir / "compare.csv") == first);
}

TEST_CASE("cmd_compare needs at least two runs") {
  cli::CliConfig config = cli::parse_config("map = m\nruns = 1\n");
  CHECK_THROWS_AS(cli::cmd_compare(config), cli::ConfigError);
}

TEST_CASE("cmd_curve merges tables from disk") {
  const fs::path dir = fresh_dir("curve");
  write_text(dir / "a.csv", "evaluations,mean_best,run0\n10,1,1\n20,2,2\n");
  write_text(dir / "b.csv", "evaluations,mean_best,run0\n10,3,3\n20,4,4\n");
  const fs::path merged_path = dir / "merged.csv";
  CHECK(cli::cmd_curve({(dir / "a.csv").string(), (dir / "b.csv").string()}, merged_path.string()) == 0);
  CHECK(slurp(merged_path) == "evaluations,mean_best,run0,run1\n10,2,1,3\n20,3,2,4\n");
  CHECK_THROWS(cli::cmd_curve({(dir / "absent.csv").string()}, std::nullopt));
}

TEST_CASE("parse_branch_average accepts fractions and decimals") {
  CHECK(cli::parse_branch_average("32/7") == doctest::Approx(32.0 / 7.0).epsilon(1e-15));
  CHECK(cli::parse_branch_average("4.5") == 4.5);
  CHECK_THROWS_AS(cli::parse_branch_average("x"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_branch_average("3/0"), cli::ConfigError);
}

#ifdef GNPBENCH_CLI_BIN

TEST_CASE("the binary reports the search space") {
  const ExecResult r = exec(std::string(GNPBENCH_CLI_BIN) + " search-space");
  CHECK(r.code == 0);
  CHECK(r.output.find("log10 = 67.1030") != std::string::npos);
  CHECK(r.output.find("log10 = 67.5801") != std::string::npos);

  const ExecResult bad = exec(std::string(GNPBENCH_CLI_BIN) + " search-space --ps 0");
  CHECK(bad.code == 2);
}

TEST_CASE("the binary validates maps with the documented exit codes") {
  const fs::path dir = fresh_dir("bin_validate");
  write_text(dir / "ok.map", kTinyMap);
  const ExecResult good = exec(std::string(GNPBENCH_CLI_BIN) + " validate-map " + (dir / "ok.map").string());
  CHECK(good.code == 0);
  CHECK(good.output.find("8x3, agents=2, tiles=2, holes=2") != std::string::npos);

  const ExecResult absent =
      exec(std::string(GNPBENCH_CLI_BIN) + " validate-map " + (dir / "missing.map").string());
  CHECK(absent.code == 1);

  write_text(dir / "noholes.map", ">.T\n...\n");
  const ExecResult holeless =
      exec(std::string(GNPBENCH_CLI_BIN) + " validate-map " + (dir / "noholes.map").string());
  CHECK(holeless.code == 1);
  CHECK(holeless.output.find("no holes") != std::string::npos);
}

TEST_CASE("the binary maps config problems to exit code 2") {
  const fs::path dir = fresh_dir("bin_config");
  write_text(dir / "broken.cfg", "variant = gnp\n");
  const ExecResult missing_map =
      exec(std::string(GNPBENCH_CLI_BIN) + " run --config " + (dir / "broken.cfg").string());
  CHECK(missing_map.code == 2);
  CHECK(missing_map.output.find("missing key: map") != std::string::npos);

  const ExecResult no_config = exec(std::string(GNPBENCH_CLI_BIN) + " run");
  CHECK(no_config.code == 2);

  const ExecResult unknown = exec(std::string(GNPBENCH_CLI_BIN) + " frobnicate");
  CHECK(unknown.code == 2);
}

TEST_CASE("the binary runs an experiment end to end") {
  const fs::path dir = fresh_dir("bin_run");
  write_text(dir / "tiny.map", kTinyMap);
  write_text(dir / "exp.cfg", tiny_config_text(dir / "tiny.map", dir / "out"));
  const ExecResult r =
      exec(std::string(GNPBENCH_CLI_BIN) + " run --config " + (dir / "exp.cfg").string());
  CHECK(r.code == 0);
  CHECK(r.output.find("runs=2") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "runs.csv"));

  // --seed override changes the outputs, repeating it reproduces them
  const std::string cmd = std::string(GNPBENCH_CLI_BIN) + " run --config " +
                          (dir / "exp.cfg").string() + " --seed 99 --out " + (dir / "o2").string();
  CHECK(exec(cmd).code == 0);
  const std::string first = slurp(dir / "o2" / "runs.csv");
  CHECK(exec(cmd).code == 0);
  CHECK(slurp(dir / "o2" / "runs.csv") == first);
  CHECK(first != slurp(dir / "out" / "runs.csv"));
}

#endif  // GNPBENCH_CLI_BIN
