#include "gnpbench/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gnp {

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buffer, ptr);
}

void write_runs_csv(std::ostream& out, const std::vector<RunSummary>& runs) {
  out << "run,seed,final_best,success\n";
  for (size_t r = 0; r < runs.size(); ++r) {
    out << r << ',' << runs[r].seed << ',' << format_double(runs[r].final_best) << ','
        << (runs[r].success ? 1 : 0) << '\n';
  }
}

void write_curve_csv(std::ostream& out, const CurveTable& table) {
  out << "evaluations,mean_best";
  for (size_t r = 0; r < table.runs.size(); ++r) out << ",run" << r;
  out << '\n';
  for (size_t i = 0; i < table.evaluations.size(); ++i) {
    out << table.evaluations[i] << ',' << format_double(table.mean[i]);
    for (const auto& column : table.runs) out << ',' << format_double(column[i]);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double_field(const std::string& field, size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw std::runtime_error("curve csv line " + std::to_string(line) + ": bad number '" + field + "'");
  return value;
}

}  // namespace

CurveTable read_curve_csv(std::istream& in) {
  CurveTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("curve csv: missing header");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "evaluations" || header[1] != "mean_best")
    throw std::runtime_error("curve csv: expected header evaluations,mean_best,run0,...");
  const size_t run_count = header.size() - 2;
  table.runs.resize(run_count);

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error("curve csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    long long evaluations = 0;
    const auto [ptr, ec] =
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), evaluations);
    if (ec != std::errc() || ptr != fields[0].data() + fields[0].size())
      throw std::runtime_error("curve csv line " + std::to_string(lineno) + ": bad evaluation count");
    table.evaluations.push_back(evaluations);
    table.mean.push_back(parse_double_field(fields[1], lineno));
    for (size_t r = 0; r < run_count; ++r)
      table.runs[r].push_back(parse_double_field(fields[2 + r], lineno));
  }
  if (table.evaluations.empty()) throw std::runtime_error("curve csv: no data rows");
  return table;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "algorithm,rank,mean,std,successes,p_value_vs_proposed\n";
  for (const CompareRow& row : rows) {
    out << row.algorithm << ',' << row.rank << ',' << format_double(row.mean) << ','
        << format_double(row.stddev) << ',' << row.successes << ',';
    if (row.p_value.has_value()) out << format_double(*row.p_value);
    out << '\n';
  }
}

}  // namespace gnp
