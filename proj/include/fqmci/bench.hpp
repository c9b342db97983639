#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fqmci {

struct SweepConfig {
  std::string distribution;  // path to a distribution file
  std::string function = "identity";
  std::vector<std::string> methods;  // "classical" | "rescaled" | "fourier"
  std::int64_t budget_min = 0;
  std::int64_t budget_max = 0;
  int budget_points = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  double delta = 0.5;
  double stretch = 2.0;
  std::string qae = "mle";
  std::string output;  // CSV path
};

// Key-value text; unknown keys are rejected. See README for the grammar.
SweepConfig parse_sweep_config(const std::string& path);

// Geometric grid from budget_min to budget_max with budget_points entries,
// rounded to integers; throws if rounding collapses two points.
std::vector<std::int64_t> budget_grid(const SweepConfig& cfg);

struct SweepRow {
  std::string method;
  std::int64_t q = 0;  // requested budget
  double mean_estimate = 0.0;
  double rmse = 0.0;
  double mean_queries = 0.0;  // measured uses of the state-prep oracle
  std::int64_t max_depth = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<std::pair<std::string, double>> slopes;  // log-log rmse vs queries
  double oracle = 0.0;
  std::string csv_path;
};

// Runs runs-per-budget estimates for every (method, budget) cell, writes the
// CSV to cfg.output, and returns rows plus fitted slopes. Identical configs
// produce byte-identical CSVs for any thread count; threads <= 0 means one
// worker per hardware thread.
SweepReport run_sweep(const SweepConfig& cfg, int threads = 1);

// Least-squares slope of log10(y) against log10(x). Requires >= 3 points and
// strictly positive coordinates.
double fit_slope(const std::vector<std::pair<double, double>>& xy);

struct CrossoverResult {
  bool found = false;
  bool degenerate = false;  // curves indistinguishable over the whole overlap
  double queries = 0.0;     // abscissa where method_a's rmse dips below method_b's
  std::int64_t depth_at = 0;  // method_a's max depth at the first budget past it
};

// Piecewise-linear intersection of the two methods' log-log rmse curves.
CrossoverResult find_crossover(const SweepReport& report, const std::string& method_a,
                               const std::string& method_b);

std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace fqmci
