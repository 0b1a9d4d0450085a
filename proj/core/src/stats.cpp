#include "gnpbench/stats.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace gnp {

AggregateStats aggregate(std::span<const RunSummary> runs) {
  AggregateStats stats;
  stats.n = static_cast<int>(runs.size());
  if (runs.empty()) return stats;
  double sum = 0.0;
  for (const auto& r : runs) {
    sum += r.final_best;
    if (r.success) ++stats.successes;
  }
  stats.mean = sum / stats.n;
  if (stats.n > 1) {
    double ss = 0.0;
    for (const auto& r : runs) {
      const double d = r.final_best - stats.mean;
      ss += d * d;
    }
    stats.stddev = std::sqrt(ss / (stats.n - 1));
  }
  return stats;
}

BatchResult run_batch(const ExperimentConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("run count must be >= 1");
  if (auto problems = check_config(config.evolution); !problems.empty())
    throw std::invalid_argument("invalid evolution config: " + problems.front());

  const int total_tiles = config.map.tile_count();
  BatchResult result;
  result.runs.resize(config.runs);

  const auto execute_run = [&](int r) {
    const std::uint64_t seed = config.seed_base + static_cast<std::uint64_t>(r);
    EvolveResult evo = evolve(config.evolution, config.map, seed, 1);
    RunSummary& summary = result.runs[r];
    summary.seed = seed;
    summary.curve.reserve(evo.stats.size());
    double best_so_far = -std::numeric_limits<double>::infinity();
    for (const GenerationStats& gs : evo.stats) {
      best_so_far = std::max(best_so_far, gs.best);
      summary.curve.push_back({gs.cumulative_evaluations, best_so_far});
    }
    summary.final_best = summary.curve.back().best;
    summary.success = evo.best_episode.dropped == total_tiles;
    summary.best_members = std::move(evo.best.members);
    summary.structural_violations = evo.structural_violations;
  };

  const int nthreads = std::min(std::max(config.workers, 1), config.runs);
  if (nthreads <= 1) {
    for (int r = 0; r < config.runs; ++r) execute_run(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      threads.emplace_back([&] {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= config.runs) return;
          execute_run(r);
        }
      });
    }
    for (auto& th : threads) th.join();
  }

  result.stats = aggregate(result.runs);
  return result;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  constexpr int kMaxIter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("regularized_incomplete_beta: bad arguments");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  const size_t na = a.size();
  const size_t nb = b.size();
  if (na < 2 || nb < 2) throw std::invalid_argument("welch_t_test needs at least two samples per side");

  const auto mean = [](std::span<const double> s) {
    double sum = 0.0;
    for (double v : s) sum += v;
    return sum / static_cast<double>(s.size());
  };
  const auto variance = [](std::span<const double> s, double m) {
    double ss = 0.0;
    for (double v : s) ss += (v - m) * (v - m);
    return ss / static_cast<double>(s.size() - 1);
  };

  const double ma = mean(a);
  const double mb = mean(b);
  const double va = variance(a, ma);
  const double vb = variance(b, mb);
  const double sena = va / static_cast<double>(na);
  const double senb = vb / static_cast<double>(nb);
  const double se2 = sena + senb;

  WelchResult result;
  if (se2 == 0.0) {
    result.df = static_cast<double>(na + nb - 2);
    if (ma == mb) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = ma > mb ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }

  result.t = (ma - mb) / std::sqrt(se2);
  result.df = se2 * se2 /
              (sena * sena / static_cast<double>(na - 1) + senb * senb / static_cast<double>(nb - 1));
  const double x = result.df / (result.t * result.t + result.df);
  result.p = regularized_incomplete_beta(result.df / 2.0, 0.5, x);
  return result;
}

double search_space_log10(const SearchSpaceParams& params, bool situation_based) {
  if (params.ps <= 0 || params.nj <= 0 || params.np <= 0 || !(params.nb > 0.0) || params.na <= 0)
    throw std::invalid_argument("search space parameters must be positive");
  const double base = params.ps * (params.nj * params.nb + params.np);
  const double exponent = static_cast<double>(params.ps) * (params.nj + params.np);
  double log_size = exponent * std::log10(base);
  if (situation_based) log_size += std::log10(static_cast<double>(params.na));
  return log_size;
}

namespace {

// Little-endian base-1e9 accumulator; big enough for any sane exponent.
class BigNat {
 public:
  explicit BigNat(std::uint32_t value) { limbs_.push_back(value); }

  void multiply(std::uint64_t factor) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const std::uint64_t product = static_cast<std::uint64_t>(limb) * factor + carry;
      limb = static_cast<std::uint32_t>(product % 1000000000ull);
      carry = product / 1000000000ull;
    }
    while (carry != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry % 1000000000ull));
      carry /= 1000000000ull;
    }
  }

  std::string to_string() const {
    std::string out = std::to_string(limbs_.back());
    for (auto it = limbs_.rbegin() + 1; it != limbs_.rend(); ++it) {
      std::string part = std::to_string(*it);
      out += std::string(9 - part.size(), '0') + part;
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> limbs_;
};

}  // namespace

std::optional<std::string> search_space_exact_decimal(const SearchSpaceParams& params,
                                                      bool situation_based) {
  if (params.ps <= 0 || params.nj <= 0 || params.np <= 0 || !(params.nb > 0.0) || params.na <= 0)
    throw std::invalid_argument("search space parameters must be positive");
  const double base = params.ps * (params.nj * params.nb + params.np);
  const double rounded = std::round(base);
  if (std::fabs(base - rounded) > 1e-6 || rounded < 1.0 || rounded > 4e9) return std::nullopt;

  const long long exponent = static_cast<long long>(params.ps) * (params.nj + params.np);
  BigNat acc(1);
  for (long long i = 0; i < exponent; ++i) acc.multiply(static_cast<std::uint64_t>(rounded));
  if (situation_based) acc.multiply(static_cast<std::uint64_t>(params.na));
  return acc.to_string();
}

namespace {

CurveTable aggregate_step_curves(const std::vector<std::vector<CurvePoint>>& curves) {
  CurveTable table;
  if (curves.empty()) return table;

  std::map<long long, bool> grid;
  for (const auto& curve : curves)
    for (const CurvePoint& p : curve) grid[p.evaluations] = true;
  table.evaluations.reserve(grid.size());
  for (const auto& [x, _] : grid) table.evaluations.push_back(x);

  table.runs.resize(curves.size());
  for (size_t r = 0; r < curves.size(); ++r) {
    const auto& curve = curves[r];
    if (curve.empty()) throw std::invalid_argument("cannot aggregate an empty curve");
    auto& column = table.runs[r];
    column.reserve(table.evaluations.size());
    size_t k = 0;
    double value = curve.front().best;  // clamp before the first point
    for (long long x : table.evaluations) {
      while (k < curve.size() && curve[k].evaluations <= x) value = curve[k++].best;
      column.push_back(value);
    }
  }

  table.mean.resize(table.evaluations.size());
  for (size_t i = 0; i < table.evaluations.size(); ++i) {
    double sum = 0.0;
    for (const auto& column : table.runs) sum += column[i];
    table.mean[i] = sum / static_cast<double>(table.runs.size());
  }
  return table;
}

}  // namespace

CurveTable aggregate_curves(const std::vector<RunSummary>& summaries) {
  if (summaries.empty()) throw std::invalid_argument("aggregate_curves needs at least one run");
  std::vector<std::vector<CurvePoint>> curves;
  curves.reserve(summaries.size());
  for (const auto& s : summaries) curves.push_back(s.curve);
  return aggregate_step_curves(curves);
}

CurveTable merge_curve_tables(const std::vector<CurveTable>& tables) {
  std::vector<std::vector<CurvePoint>> curves;
  for (const auto& table : tables) {
    for (const auto& column : table.runs) {
      std::vector<CurvePoint> curve;
      curve.reserve(table.evaluations.size());
      for (size_t i = 0; i < table.evaluations.size(); ++i)
        curve.push_back({table.evaluations[i], column[i]});
      curves.push_back(std::move(curve));
    }
  }
  if (curves.empty()) throw std::invalid_argument("no curves to merge");
  return aggregate_step_curves(curves);
}

}  // namespace gnp
