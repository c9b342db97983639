#pragma once

#include <cstdint>
#include <string>

#include "fqmci/rng.hpp"

namespace fqmci {

// q counts uses of the target circuit A (inverses included): one shot at
// amplification depth m costs 2m + 1.
struct QaeBudget {
  std::int64_t q = 0;
};

struct QaeResult {
  double estimate = 0.0;  // s-hat = sin^2(theta-hat), in [0, 1]
  std::int64_t queries_used = 0;
  std::int64_t max_sequential_grover = 0;
  double lambda = 1.0;  // convergence exponent of the path actually taken
};

// Direct sampling at depth 0: estimate = hits / q. MSE decays like 1/q.
QaeResult qae_classical(double theta, QaeBudget budget, ShotSampler& rng);

// Maximum-likelihood estimation over an exponential depth schedule
// m = 0, 1, 2, 4, ... with 100 shots per level; levels are added while the
// cumulative cost fits the budget and the remainder buys extra shots at the
// deepest level. MSE decays like 1/q^2. Budgets under one level's worth of
// shots fall back to qae_classical (the result then reports lambda = 1).
QaeResult qae_mle(double theta, QaeBudget budget, ShotSampler& rng);

// Noise-free limit: returns sin^2(theta) exactly, charges no queries.
QaeResult qae_exact(double theta);

// algorithm: "classical" | "mle" | "exact".
QaeResult run_qae(const std::string& algorithm, double theta, QaeBudget budget,
                  ShotSampler& rng);

// Exponent used when planning budgets for the named algorithm.
double qae_lambda(const std::string& algorithm);

}  // namespace fqmci
