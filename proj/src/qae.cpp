#include "fqmci/qae.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fqmci/simulator.hpp"

namespace fqmci {
namespace {

// Shots per schedule level. Too few shots lets a run lock onto an aliased
// likelihood lobe a few widths away from the truth, which freezes its error no
// matter how much deeper the schedule goes; 100 makes that a < 1e-5 event.
constexpr std::int64_t kShotsPerLevel = 100;
constexpr std::int64_t kGridFloor = 10000;

double check_theta(double theta) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!std::isfinite(theta) || theta < -1e-12 || theta > half_pi + 1e-12)
    throw std::invalid_argument("qae: theta must lie in [0, pi/2]");
  return std::clamp(theta, 0.0, half_pi);
}

void check_budget(QaeBudget budget) {
  if (budget.q < 1) throw std::invalid_argument("qae: budget must be >= 1");
}

struct LevelTables {
  Eigen::ArrayXd log_sin2;  // 2 log|sin((2m+1) theta_i)| over the grid
  Eigen::ArrayXd log_cos2;
};

// Grid scores reduce to weighted sums of per-level tables, which depend only
// on (grid size, depth); caching them turns the scan into a handful of fused
// multiply-adds per likelihood evaluation.
const LevelTables& level_tables(std::int64_t grid_size, std::int64_t m) {
  static std::map<std::pair<std::int64_t, std::int64_t>, LevelTables> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.try_emplace({grid_size, m});
  if (inserted) {
    Eigen::ArrayXd u = Eigen::ArrayXd::LinSpaced(grid_size, 0.0, std::numbers::pi / 2.0) *
                       static_cast<double>(2 * m + 1);
    it->second.log_sin2 = 2.0 * u.sin().abs().max(1e-300).log();
    it->second.log_cos2 = 2.0 * u.cos().abs().max(1e-300).log();
  }
  return it->second;
}

double log_likelihood(const std::vector<std::int64_t>& depths,
                      const std::vector<std::int64_t>& shots,
                      const std::vector<std::int64_t>& hits, double theta) {
  double acc = 0.0;
  for (std::size_t k = 0; k < depths.size(); ++k) {
    double u = static_cast<double>(2 * depths[k] + 1) * theta;
    double ls = std::log(std::max(std::abs(std::sin(u)), 1e-300));
    double lc = std::log(std::max(std::abs(std::cos(u)), 1e-300));
    acc += 2.0 * (static_cast<double>(hits[k]) * ls +
                  static_cast<double>(shots[k] - hits[k]) * lc);
  }
  return acc;
}

double maximize_likelihood(const std::vector<std::int64_t>& depths,
                           const std::vector<std::int64_t>& shots,
                           const std::vector<std::int64_t>& hits) {
  constexpr double half_pi = std::numbers::pi / 2.0;

  // The deepest level's likelihood lobes have width pi/(2m+1); keep at least
  // four grid points per lobe so the scan cannot skip the global one.
  const std::int64_t grid =
      std::max(kGridFloor, 4 * (2 * depths.back() + 1));
  Eigen::ArrayXd score = Eigen::ArrayXd::Zero(grid);
  for (std::size_t k = 0; k < depths.size(); ++k) {
    const LevelTables& t = level_tables(grid, depths[k]);
    score += static_cast<double>(hits[k]) * t.log_sin2 +
             static_cast<double>(shots[k] - hits[k]) * t.log_cos2;
  }
  Eigen::Index coarse;
  score.maxCoeff(&coarse);

  const double h = half_pi / static_cast<double>(grid - 1);
  double best = static_cast<double>(coarse) * h;
  double best_ll = log_likelihood(depths, shots, hits, best);
  double lo = std::max(0.0, best - 2.0 * h);
  double hi = std::min(half_pi, best + 2.0 * h);

  for (int round = 0; round < 40; ++round) {
    for (int j = 0; j <= 6; ++j) {
      double t = lo + (hi - lo) * static_cast<double>(j) / 6.0;
      double ll = log_likelihood(depths, shots, hits, t);
      if (ll > best_ll) {
        best_ll = ll;
        best = t;
      }
    }
    double w = 0.25 * (hi - lo);
    lo = std::max(0.0, best - w);
    hi = std::min(half_pi, best + w);
  }
  return best;
}

}  // namespace

QaeResult qae_classical(double theta, QaeBudget budget, ShotSampler& rng) {
  theta = check_theta(theta);
  check_budget(budget);
  std::int64_t hits = sample_grover_shots(theta, 0, budget.q, rng);
  QaeResult r;
  r.estimate = static_cast<double>(hits) / static_cast<double>(budget.q);
  r.queries_used = budget.q;
  r.max_sequential_grover = 0;
  r.lambda = 1.0;
  return r;
}

QaeResult qae_mle(double theta, QaeBudget budget, ShotSampler& rng) {
  theta = check_theta(theta);
  check_budget(budget);
  if (budget.q < kShotsPerLevel) return qae_classical(theta, budget, rng);

  std::vector<std::int64_t> depths, shots;
  std::int64_t used = 0;
  for (std::int64_t m = 0;; m = m == 0 ? 1 : 2 * m) {
    std::int64_t cost = kShotsPerLevel * (2 * m + 1);
    if (used + cost > budget.q) break;
    depths.push_back(m);
    shots.push_back(kShotsPerLevel);
    used += cost;
  }
  std::int64_t per_shot = 2 * depths.back() + 1;
  std::int64_t extra = (budget.q - used) / per_shot;
  shots.back() += extra;
  used += extra * per_shot;

  std::vector<std::int64_t> hits(depths.size());
  for (std::size_t k = 0; k < depths.size(); ++k)
    hits[k] = sample_grover_shots(theta, depths[k], shots[k], rng);

  double theta_hat = maximize_likelihood(depths, shots, hits);
  double s = std::sin(theta_hat);

  QaeResult r;
  r.estimate = s * s;
  r.queries_used = used;
  r.max_sequential_grover = depths.back();
  r.lambda = 2.0;
  return r;
}

QaeResult qae_exact(double theta) {
  theta = check_theta(theta);
  double s = std::sin(theta);
  QaeResult r;
  r.estimate = s * s;
  r.queries_used = 0;
  r.max_sequential_grover = 0;
  r.lambda = 2.0;
  return r;
}

QaeResult run_qae(const std::string& algorithm, double theta, QaeBudget budget,
                  ShotSampler& rng) {
  if (algorithm == "classical") return qae_classical(theta, budget, rng);
  if (algorithm == "mle") return qae_mle(theta, budget, rng);
  if (algorithm == "exact") return qae_exact(theta);
  throw std::invalid_argument("unknown qae algorithm '" + algorithm +
                              "' (expected classical, mle, or exact)");
}

double qae_lambda(const std::string& algorithm) {
  if (algorithm == "classical") return 1.0;
  if (algorithm == "mle" || algorithm == "exact") return 2.0;
  throw std::invalid_argument("unknown qae algorithm '" + algorithm +
                              "' (expected classical, mle, or exact)");
}

}  // namespace fqmci
