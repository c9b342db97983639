#include "fqmci/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fqmci/estimators.hpp"

namespace fqmci {
namespace {

const std::set<std::string> kMethods = {"classical", "rescaled", "fourier"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::int64_t to_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    std::int64_t out = std::stoll(v, &pos);
    if (pos == v.size()) return out;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("sweep config: bad integer for " + key + ": '" + v + "'");
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos == v.size()) return out;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("sweep config: bad number for " + key + ": '" + v + "'");
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep config: " + path);

  SweepConfig cfg;
  cfg.seed = 1;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("sweep config: expected key = value, got '" + line +
                                  "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw std::invalid_argument("sweep config: duplicate key '" + key + "'");

    if (key == "distribution") {
      cfg.distribution = value;
    } else if (key == "function") {
      cfg.function = value;
    } else if (key == "methods") {
      std::istringstream ms(value);
      std::string tok;
      while (std::getline(ms, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) cfg.methods.push_back(tok);
      }
    } else if (key == "budget_min") {
      cfg.budget_min = to_int(value, key);
    } else if (key == "budget_max") {
      cfg.budget_max = to_int(value, key);
    } else if (key == "budget_points") {
      cfg.budget_points = static_cast<int>(to_int(value, key));
    } else if (key == "runs") {
      cfg.runs = static_cast<int>(to_int(value, key));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
    } else if (key == "delta") {
      cfg.delta = to_double(value, key);
    } else if (key == "stretch") {
      cfg.stretch = to_double(value, key);
    } else if (key == "qae") {
      cfg.qae = value;
    } else if (key == "output") {
      cfg.output = value;
    } else {
      throw std::invalid_argument("sweep config: unknown key '" + key + "'");
    }
  }

  if (cfg.distribution.empty())
    throw std::invalid_argument("sweep config: missing distribution");
  if (cfg.output.empty()) throw std::invalid_argument("sweep config: missing output");
  if (cfg.methods.empty()) throw std::invalid_argument("sweep config: missing methods");
  std::set<std::string> uniq;
  for (const auto& m : cfg.methods) {
    if (!kMethods.count(m))
      throw std::invalid_argument("sweep config: unknown method '" + m + "'");
    if (!uniq.insert(m).second)
      throw std::invalid_argument("sweep config: repeated method '" + m + "'");
  }
  if (cfg.runs < 1) throw std::invalid_argument("sweep config: runs must be >= 1");
  if (cfg.budget_min < 1 || cfg.budget_max < cfg.budget_min)
    throw std::invalid_argument("sweep config: need 1 <= budget_min <= budget_max");
  if (cfg.budget_points < 1)
    throw std::invalid_argument("sweep config: budget_points must be >= 1");
  budget_grid(cfg);  // validates the grid is strictly increasing
  return cfg;
}

std::vector<std::int64_t> budget_grid(const SweepConfig& cfg) {
  if (cfg.budget_points == 1) {
    if (cfg.budget_min != cfg.budget_max)
      throw std::invalid_argument("sweep config: one budget point needs min == max");
    return {cfg.budget_min};
  }
  std::vector<std::int64_t> grid(static_cast<std::size_t>(cfg.budget_points));
  double ratio = static_cast<double>(cfg.budget_max) / static_cast<double>(cfg.budget_min);
  for (int i = 0; i < cfg.budget_points; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(cfg.budget_points - 1);
    grid[static_cast<std::size_t>(i)] =
        std::llround(static_cast<double>(cfg.budget_min) * std::pow(ratio, t));
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("sweep config: budget grid is not strictly "
                                  "increasing after rounding");
  return grid;
}

double fit_slope(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 3) throw std::invalid_argument("fit_slope: need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("fit_slope: coordinates must be positive");
    mx += std::log10(x);
    my += std::log10(y);
  }
  mx /= static_cast<double>(xy.size());
  my /= static_cast<double>(xy.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    double dx = std::log10(x) - mx, dy = std::log10(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissa");
  return sxy / sxx;
}

namespace {

struct RunOutcome {
  double estimate = 0.0;
  std::int64_t queries = 0;
  std::int64_t depth = 0;
};

std::uint64_t stream_id(std::size_t method, std::size_t budget, int run) {
  return (static_cast<std::uint64_t>(method) << 48) |
         (static_cast<std::uint64_t>(budget) << 32) |
         static_cast<std::uint64_t>(run);
}

}  // namespace

SweepReport run_sweep(const SweepConfig& cfg, int threads) {
  DiscreteDistribution dist = load_distribution(cfg.distribution);
  FunctionSpec f = parse_function(cfg.function);
  std::vector<std::int64_t> grid = budget_grid(cfg);
  qae_lambda(cfg.qae);

  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, cfg.runs));

  SweepReport report;
  report.oracle =
      brute_force_expectation(dist, {0}, {[&](double x) { return f.eval(x); }});
  report.csv_path = cfg.output;

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    const std::string& method = cfg.methods[mi];
    std::vector<std::pair<double, double>> slope_points;

    for (std::size_t bi = 0; bi < grid.size(); ++bi) {
      const std::int64_t budget = grid[bi];

      // Component angles and budgets depend only on (method, budget); price
      // them once and share the plan across runs and workers.
      EstimatePlan plan;
      if (method == "fourier") {
        FourierOptions opt;
        opt.q0 = static_cast<double>(budget);
        opt.qae = cfg.qae;
        opt.delta = cfg.delta;
        opt.stretch = cfg.stretch;
        plan = build_fourier_plan(dist, 0, f, opt);
      }

      std::vector<RunOutcome> outcomes(static_cast<std::size_t>(cfg.runs));
      auto worker = [&](int first, int last) {
        for (int run = first; run < last; ++run) {
          ShotSampler rng(cfg.seed, stream_id(mi, bi, run));
          EstimateReport rep;
          if (method == "classical") {
            rep = classical_mci(dist, 0, f, budget, rng);
          } else if (method == "rescaled") {
            rep = rescaled_qmci(dist, 0, budget, cfg.qae, rng);
          } else {
            rep = execute_plan(plan, rng);
          }
          outcomes[static_cast<std::size_t>(run)] = {rep.estimate, rep.queries_total,
                                                     rep.max_depth};
        }
      };

      if (threads == 1) {
        worker(0, cfg.runs);
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
          int first = static_cast<int>(static_cast<std::int64_t>(cfg.runs) * w / threads);
          int last =
              static_cast<int>(static_cast<std::int64_t>(cfg.runs) * (w + 1) / threads);
          pool.emplace_back(worker, first, last);
        }
        for (auto& t : pool) t.join();
      }

      SweepRow row;
      row.method = method;
      row.q = budget;
      double sum = 0.0, sq = 0.0, quer = 0.0;
      for (const auto& out : outcomes) {
        sum += out.estimate;
        double err = out.estimate - report.oracle;
        sq += err * err;
        quer += static_cast<double>(out.queries);
        row.max_depth = std::max(row.max_depth, out.depth);
      }
      row.mean_estimate = sum / cfg.runs;
      row.rmse = std::sqrt(sq / cfg.runs);
      row.mean_queries = quer / cfg.runs;
      report.rows.push_back(row);
      slope_points.emplace_back(row.mean_queries, row.rmse);
    }

    double slope = std::numeric_limits<double>::quiet_NaN();
    try {
      slope = fit_slope(slope_points);
    } catch (const std::invalid_argument&) {
      // Not enough points or an exact run; leave the slope as NaN.
    }
    report.slopes.emplace_back(method, slope);
  }

  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write CSV: " + cfg.output);
  out << to_csv(report.rows);
  return report;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "method,q,mean_estimate,rmse,queries_used,max_depth\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%lld,%.10g,%.10g,%.10g,%lld\n", r.method.c_str(),
                  static_cast<long long>(r.q), r.mean_estimate, r.rmse, r.mean_queries,
                  static_cast<long long>(r.max_depth));
    out << buf;
  }
  return out.str();
}

CrossoverResult find_crossover(const SweepReport& report, const std::string& method_a,
                               const std::string& method_b) {
  std::vector<std::pair<double, double>> a, b;  // (log10 queries, log10 rmse)
  for (const auto& row : report.rows) {
    if (!(row.mean_queries > 0.0) || !(row.rmse > 0.0)) continue;
    auto pt = std::make_pair(std::log10(row.mean_queries), std::log10(row.rmse));
    if (row.method == method_a) a.push_back(pt);
    if (row.method == method_b) b.push_back(pt);
  }
  CrossoverResult res;
  if (a.size() < 2 || b.size() < 2) return res;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  auto interp = [](const std::vector<std::pair<double, double>>& pts, double x) {
    if (x <= pts.front().first) return pts.front().second;
    if (x >= pts.back().first) return pts.back().second;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (x <= pts[i].first) {
        double t = (x - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
        return pts[i - 1].second + t * (pts[i].second - pts[i - 1].second);
      }
    }
    return pts.back().second;
  };

  double lo = std::max(a.front().first, b.front().first);
  double hi = std::min(a.back().first, b.back().first);
  if (!(lo < hi)) return res;

  std::vector<double> knots{lo, hi};
  for (const auto& [x, y] : a)
    if (x > lo && x < hi) knots.push_back(x);
  for (const auto& [x, y] : b)
    if (x > lo && x < hi) knots.push_back(x);
  std::sort(knots.begin(), knots.end());

  std::vector<double> diff(knots.size());
  bool all_equal = true;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    diff[i] = interp(a, knots[i]) - interp(b, knots[i]);
    if (std::abs(diff[i]) > 1e-12) all_equal = false;
  }

  auto depth_at = [&](double log_q) {
    for (const auto& row : report.rows)
      if (row.method == method_a && std::log10(std::max(row.mean_queries, 1.0)) >=
                                        log_q - 1e-12)
        return row.max_depth;
    return report.rows.empty() ? std::int64_t{0} : report.rows.back().max_depth;
  };

  if (all_equal) {
    res.found = true;
    res.degenerate = true;
    res.queries = std::pow(10.0, lo);
    res.depth_at = depth_at(lo);
    return res;
  }

  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (diff[i] < 0.0) {
      double x = knots[i];
      if (i > 0 && diff[i - 1] > 0.0) {
        double t = diff[i - 1] / (diff[i - 1] - diff[i]);
        x = knots[i - 1] + t * (knots[i] - knots[i - 1]);
      }
      res.found = true;
      res.queries = std::pow(10.0, x);
      res.depth_at = depth_at(x);
      return res;
    }
  }
  return res;
}

}  // namespace fqmci
