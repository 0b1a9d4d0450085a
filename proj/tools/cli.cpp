#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace gnp::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("key " + key + ": bad value '" + value + "'");
  return out;
}

}  // namespace

double parse_branch_average(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const double num = parse_number<double>("nb", trim(text.substr(0, slash)));
    const double den = parse_number<double>("nb", trim(text.substr(slash + 1)));
    if (den == 0.0) throw ConfigError("nb: division by zero");
    return num / den;
  }
  return parse_number<double>("nb", text);
}

CliConfig parse_config(const std::string& text) {
  CliConfig config;
  bool have_map = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");

    if (key == "map") {
      config.map_path = value;
      have_map = true;
    } else if (key == "variant") {
      const auto kind = variant_from_name(value);
      if (!kind) throw ConfigError("key variant: unknown variant '" + value + "'");
      config.variant = *kind;
    } else if (key == "population_size") {
      config.population_size = parse_number<int>(key, value);
    } else if (key == "elite_count") {
      config.elite_count = parse_number<int>(key, value);
    } else if (key == "crossover_prob") {
      config.crossover_prob = parse_number<double>(key, value);
    } else if (key == "mutation_prob") {
      config.mutation_prob = parse_number<double>(key, value);
    } else if (key == "tournament_size") {
      config.tournament_size = parse_number<int>(key, value);
    } else if (key == "program_size") {
      config.program_size = parse_number<int>(key, value);
    } else if (key == "initial_steps") {
      config.initial_steps = parse_number<int>(key, value);
    } else if (key == "generations") {
      config.generations = parse_number<int>(key, value);
    } else if (key == "runs") {
      config.runs = parse_number<int>(key, value);
    } else if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "workers") {
      config.workers = parse_number<int>(key, value);
    } else if (key == "out_dir") {
      config.out_dir = value;
    } else if (key == "w1") {
      config.weights.w1 = parse_number<double>(key, value);
    } else if (key == "w2") {
      config.weights.w2 = parse_number<double>(key, value);
    } else if (key == "w3") {
      config.weights.w3 = parse_number<double>(key, value);
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }

  if (!have_map) throw ConfigError("missing key: map");
  if (config.program_size < 1) throw ConfigError("key program_size: must be >= 1");
  if (config.runs < 1) throw ConfigError("key runs: must be >= 1");
  if (config.workers < 1) throw ConfigError("key workers: must be >= 1");
  return config;
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_overrides(const Overrides& overrides, CliConfig& config) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.workers) config.workers = *overrides.workers;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.variant) config.variant = *overrides.variant;
}

int derive_group_count(int population_size, GraphAssignment graphs, int num_agents, int elite_count) {
  int groups = graphs == GraphAssignment::PerAgent ? population_size / num_agents : population_size;
  if (groups > elite_count && (groups - elite_count) % 2 != 0) --groups;
  if (groups <= elite_count)
    throw ConfigError("population_size " + std::to_string(population_size) + " leaves only " +
                      std::to_string(groups) + " group(s) for elite_count " + std::to_string(elite_count));
  return groups;
}

ExperimentConfig build_experiment(const CliConfig& config, VariantKind kind, const GridMap& map) {
  const Variant variant = variant_of(kind);
  const int num_agents = static_cast<int>(map.agents.size());

  ExperimentConfig experiment;
  experiment.evolution.variant = variant;
  experiment.evolution.num_agents = num_agents;
  experiment.evolution.group_count =
      derive_group_count(config.population_size, variant.graphs, num_agents, config.elite_count);
  experiment.evolution.elite_count = config.elite_count;
  experiment.evolution.crossover_prob = config.crossover_prob;
  experiment.evolution.mutation_prob = config.mutation_prob;
  experiment.evolution.tournament_size = config.tournament_size;
  experiment.evolution.generations = config.generations;
  experiment.evolution.library = tileworld_library(config.program_size);
  experiment.evolution.initial_steps = config.initial_steps;
  experiment.evolution.weights = config.weights;
  if (auto problems = check_config(experiment.evolution); !problems.empty())
    throw ConfigError("invalid configuration: " + problems.front());

  experiment.map = map;
  experiment.runs = config.runs;
  experiment.seed_base = config.seed;
  experiment.workers = config.workers;
  return experiment;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string aggregate_line(const AggregateStats& stats) {
  return "runs=" + std::to_string(stats.n) + " mean=" + format_double(stats.mean) +
         " std=" + format_double(stats.stddev) + " successes=" + std::to_string(stats.successes) + "/" +
         std::to_string(stats.n);
}

}  // namespace

int cmd_run(const CliConfig& config) {
  const GridMap map = load_map(config.map_path);
  const ExperimentConfig experiment = build_experiment(config, config.variant, map);
  const BatchResult batch = run_batch(experiment);

  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  {
    std::ostringstream runs;
    write_runs_csv(runs, batch.runs);
    write_file(out_dir / "runs.csv", runs.str());
  }
  {
    std::ostringstream curve;
    write_curve_csv(curve, aggregate_curves(batch.runs));
    write_file(out_dir / "curve.csv", curve.str());
  }

  int best_run = 0;
  for (size_t r = 1; r < batch.runs.size(); ++r)
    if (batch.runs[r].final_best > batch.runs[best_run].final_best) best_run = static_cast<int>(r);
  const auto& best = batch.runs[best_run].best_members;
  for (size_t m = 0; m < best.size(); ++m)
    write_file(out_dir / ("best_" + std::to_string(m) + ".txt"), to_text(best[m]));

  std::cout << variant_name(config.variant) << ": " << aggregate_line(batch.stats) << "\n";
  return 0;
}

int cmd_compare(const CliConfig& config) {
  if (config.runs < 2) throw ConfigError("compare needs runs >= 2");
  const GridMap map = load_map(config.map_path);

  constexpr VariantKind kOrder[] = {VariantKind::Gnp, VariantKind::GnpSimplified, VariantKind::Sbgnp,
                                    VariantKind::Proposed};
  std::vector<BatchResult> batches;
  std::vector<std::vector<double>> samples;
  for (VariantKind kind : kOrder) {
    const ExperimentConfig experiment = build_experiment(config, kind, map);
    batches.push_back(run_batch(experiment));
    std::vector<double> finals;
    finals.reserve(batches.back().runs.size());
    for (const auto& run : batches.back().runs) finals.push_back(run.final_best);
    samples.push_back(std::move(finals));
  }

  // rank 1 = highest mean; ties keep the listing order
  std::vector<int> order(4);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return batches[a].stats.mean > batches[b].stats.mean; });
  std::vector<int> rank(4);
  for (int i = 0; i < 4; ++i) rank[order[i]] = i + 1;

  std::vector<CompareRow> rows;
  for (int i = 0; i < 4; ++i) {
    CompareRow row;
    row.algorithm = variant_name(kOrder[i]);
    row.rank = rank[i];
    row.mean = batches[i].stats.mean;
    row.stddev = batches[i].stats.stddev;
    row.successes = batches[i].stats.successes;
    if (kOrder[i] != VariantKind::Proposed) row.p_value = welch_t_test(samples[i], samples[3]).p;
    rows.push_back(std::move(row));
  }

  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);
  std::ostringstream compare;
  write_compare_csv(compare, rows);
  write_file(out_dir / "compare.csv", compare.str());

  for (int i = 0; i < 4; ++i) {
    std::cout << rows[i].algorithm << ": rank=" << rows[i].rank << " " << aggregate_line(batches[i].stats);
    if (rows[i].p_value) std::cout << " p_vs_proposed=" << format_double(*rows[i].p_value);
    std::cout << "\n";
  }
  return 0;
}

int cmd_curve(const std::vector<std::string>& inputs, const std::optional<std::string>& out_path) {
  if (inputs.empty()) throw ConfigError("curve needs at least one input csv");
  std::vector<CurveTable> tables;
  for (const std::string& path : inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    tables.push_back(read_curve_csv(in));
  }
  const CurveTable merged = merge_curve_tables(tables);
  if (out_path) {
    std::ostringstream out;
    write_curve_csv(out, merged);
    write_file(*out_path, out.str());
  } else {
    write_curve_csv(std::cout, merged);
  }
  return 0;
}

int cmd_search_space(const SearchSpaceParams& params) {
  if (params.ps <= 0 || params.nj <= 0 || params.np <= 0 || !(params.nb > 0.0) || params.na <= 0)
    throw ConfigError("search-space parameters must be positive");

  char line[128];
  std::snprintf(line, sizeof(line), "gnp: log10 = %.4f", search_space_log10(params, false));
  std::cout << line << "\n";
  if (const auto exact = search_space_exact_decimal(params, false))
    std::cout << "gnp: exact = " << *exact << "\n";

  std::snprintf(line, sizeof(line), "sbgnp (na=%d): log10 = %.4f", params.na,
                search_space_log10(params, true));
  std::cout << line << "\n";
  if (const auto exact = search_space_exact_decimal(params, true))
    std::cout << "sbgnp (na=" << params.na << "): exact = " << *exact << "\n";
  return 0;
}

int cmd_validate_map(const std::string& path) {
  try {
    const GridMap map = load_map(path);
    std::cout << map.width << "x" << map.height << ", agents=" << map.agents.size()
              << ", tiles=" << map.tile_count() << ", holes=" << map.hole_count() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

}  // namespace gnp::cli
