#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnpbench/evolution.hpp"

namespace gnp {

struct ExperimentConfig {
  EvolutionConfig evolution;
  GridMap map;
  int runs = 30;
  std::uint64_t seed_base = 1;  // run r uses master seed seed_base + r
  int workers = 1;
};

struct CurvePoint {
  long long evaluations = 0;
  double best = 0.0;
};

struct RunSummary {
  std::uint64_t seed = 0;
  double final_best = 0.0;
  bool success = false;                 // the final best group drops every tile
  std::vector<CurvePoint> curve;        // best-so-far fitness per generation
  std::vector<Individual> best_members; // the final best group's program(s)
  long long structural_violations = 0;  // nonzero only with per-generation validation on
};

struct AggregateStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, n-1 denominator
  int successes = 0;
  int n = 0;
};

AggregateStats aggregate(std::span<const RunSummary> runs);

struct BatchResult {
  std::vector<RunSummary> runs;
  AggregateStats stats;
};

// `runs` independent evolve() calls on seeds seed_base+0 .. seed_base+R-1,
// distributed across `workers` threads. Output is identical for any worker
// count.
BatchResult run_batch(const ExperimentConfig& config);

// Continued-fraction evaluation; needed for the Student-t tail.
double regularized_incomplete_beta(double a, double b, double x);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Welch's unequal-variance two-sample t-test, two-sided p via the
// regularized incomplete beta. Both samples need at least two values. When
// both variances vanish the result degenerates to t=0, p=1 for equal means
// and p=0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct SearchSpaceParams {
  int ps = 0;      // instances of each function per individual
  int nj = 0;      // judgment function count
  int np = 0;      // processing function count
  double nb = 0.0; // average branches per judgment function
  int na = 1;      // agent count, used in situation-based mode
};

// log10 of (PS*(NJ*NB+NP))^(PS*(NJ+NP)), plus log10(NA) in situation-based
// mode. Logarithmic because the plain value overflows any fixed-width type.
double search_space_log10(const SearchSpaceParams& params, bool situation_based);

// Exact decimal rendering via an arbitrary-width accumulator; available only
// when PS*(NJ*NB+NP) is an integer.
std::optional<std::string> search_space_exact_decimal(const SearchSpaceParams& params,
                                                      bool situation_based);

// One curve per run on a shared evaluation grid (the union of every run's
// generation points), values carried forward step-wise, plus the per-point
// mean across runs.
struct CurveTable {
  std::vector<long long> evaluations;
  std::vector<double> mean;
  std::vector<std::vector<double>> runs;  // runs[r][i] pairs with evaluations[i]
};

CurveTable aggregate_curves(const std::vector<RunSummary>& summaries);

// Re-aggregation of already-tabulated curves (the `curve` subcommand): every
// run column of every input becomes one run of the merged table.
CurveTable merge_curve_tables(const std::vector<CurveTable>& tables);

}  // namespace gnp
