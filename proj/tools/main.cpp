#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<std::string> variant;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config file")->required();
  cmd->add_option("--seed", [&flags](const std::vector<std::string>& v) {
        flags.seed = std::stoull(v.back());
        return true;
      },
      "seed base override");
  cmd->add_option("--workers", [&flags](const std::vector<std::string>& v) {
        flags.workers = std::stoi(v.back());
        return true;
      },
      "worker thread override");
  cmd->add_option("--out", [&flags](const std::vector<std::string>& v) {
        flags.out_dir = v.back();
        return true;
      },
      "output directory override");
  cmd->add_option("--variant", [&flags](const std::vector<std::string>& v) {
        flags.variant = v.back();
        return true;
      },
      "variant override")
      ->check(CLI::IsMember({"gnp", "gnp-simplified", "sbgnp", "proposed"}));
}

gnp::cli::CliConfig resolve_config(const CommonFlags& flags) {
  gnp::cli::CliConfig config = gnp::cli::load_config(flags.config_path);
  gnp::cli::Overrides overrides;
  overrides.seed = flags.seed;
  overrides.workers = flags.workers;
  overrides.out_dir = flags.out_dir;
  if (flags.variant) overrides.variant = gnp::variant_from_name(*flags.variant);
  gnp::cli::apply_overrides(overrides, config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genetic Network Programming on Tileworld: evolution runs, variant comparison, utilities"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one variant and write runs.csv / curve.csv");
  add_common_flags(run, run_flags);

  CommonFlags compare_flags;
  CLI::App* compare = app.add_subcommand("compare", "run all four variants and write compare.csv");
  add_common_flags(compare, compare_flags);

  std::vector<std::string> curve_inputs;
  std::optional<std::string> curve_out;
  CLI::App* curve = app.add_subcommand("curve", "re-aggregate existing curve.csv files");
  curve->add_option("inputs", curve_inputs, "curve.csv files")->required()->expected(-1);
  curve->add_option("--out", [&curve_out](const std::vector<std::string>& v) {
    curve_out = v.back();
    return true;
  },
      "merged csv path (default: stdout)");

  int ss_ps = 3, ss_nj = 7, ss_np = 4, ss_na = 3;
  std::string ss_nb = "32/7";
  CLI::App* search = app.add_subcommand("search-space", "print the search-space size");
  search->add_option("--ps", ss_ps, "program size");
  search->add_option("--nj", ss_nj, "judgment function count");
  search->add_option("--np", ss_np, "processing function count");
  search->add_option("--nb", ss_nb, "average branches per judgment (fraction or decimal)");
  search->add_option("--na", ss_na, "agent count");

  std::string map_path;
  CLI::App* validate = app.add_subcommand("validate-map", "parse a map file and print its shape");
  validate->add_option("map", map_path, "map file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return gnp::cli::cmd_run(resolve_config(run_flags));
    if (compare->parsed()) return gnp::cli::cmd_compare(resolve_config(compare_flags));
    if (curve->parsed()) return gnp::cli::cmd_curve(curve_inputs, curve_out);
    if (search->parsed()) {
      gnp::SearchSpaceParams params;
      params.ps = ss_ps;
      params.nj = ss_nj;
      params.np = ss_np;
      params.nb = gnp::cli::parse_branch_average(ss_nb);
      params.na = ss_na;
      return gnp::cli::cmd_search_space(params);
    }
    if (validate->parsed()) return gnp::cli::cmd_validate_map(map_path);
  } catch (const gnp::cli::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
