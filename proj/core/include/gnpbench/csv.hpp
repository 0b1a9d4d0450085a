#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gnpbench/stats.hpp"

namespace gnp {

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

// runs.csv: run,seed,final_best,success
void write_runs_csv(std::ostream& out, const std::vector<RunSummary>& runs);

// curve.csv: evaluations,mean_best,run0,run1,...
void write_curve_csv(std::ostream& out, const CurveTable& table);
CurveTable read_curve_csv(std::istream& in);

struct CompareRow {
  std::string algorithm;
  int rank = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int successes = 0;
  std::optional<double> p_value;  // empty for the row compared against
};

// compare.csv: algorithm,rank,mean,std,successes,p_value_vs_proposed
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

}  // namespace gnp
