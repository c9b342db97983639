#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fqmci/distribution.hpp"
#include "fqmci/function_spec.hpp"
#include "fqmci/fourier.hpp"
#include "fqmci/qae.hpp"

namespace fqmci {

// Harmonic budget split q_n = ceil(q0 * n^-kappa), kappa = 2 - delta, over
// n = 1 .. n_max = ceil(q0^(lambda/4)). Total cost for a cos/sin pair per
// harmonic stays under 2*q0*zeta(kappa) + 2*n_max.
struct AllocationPlan {
  int n_max = 0;
  double kappa = 0.0;
  std::vector<std::int64_t> q_n;  // q_n[n - 1] is harmonic n's budget
  double declared_bound = 0.0;
};

// Requires q0 >= 1, lambda in [1, 2], delta in (0, 1).
AllocationPlan plan_allocation(double q0, double lambda, double delta);

struct ComponentEstimate {
  int n = 0;
  int m = 0;      // second harmonic; 0 for single-axis components
  char kind = 'a';  // a/b: cos/sin; c/d: bivariate sin sum/diff; f/g: cross series
  double weight = 0.0;
  double amplitude = 0.0;  // s-hat reported by QAE
  double value = 0.0;      // 1 - 2 * s-hat
  std::int64_t queries = 0;
};

struct EstimateReport {
  double estimate = 0.0;
  std::optional<double> true_value;  // brute-force oracle when cheap to compute
  std::int64_t queries_total = 0;
  std::int64_t max_depth = 0;
  int n_max = 0;
  double declared_budget_bound = 0.0;
  std::vector<ComponentEstimate> components;
};

struct FourierOptions {
  double q0 = 0.0;
  std::string qae = "mle";
  double delta = 0.5;
  double stretch = 2.0;
};

// A fully priced estimate: component angles, weights, and budgets, ready to
// execute. Building one costs a statevector pass per component; executing one
// only samples, so sweeps reuse a plan across repeated runs.
struct EstimatePlan {
  double constant = 0.0;
  std::optional<double> true_value;
  int n_max = 0;
  double declared_bound = 0.0;
  std::string qae = "mle";

  struct Job {
    double theta = 0.0;
    double weight = 0.0;
    std::int64_t budget = 0;
    int n = 0;
    int m = 0;
    char kind = 'a';
  };
  std::vector<Job> jobs;
};

EstimatePlan build_fourier_plan(const DiscreteDistribution& dist, int axis,
                                const FunctionSpec& f, const FourierOptions& opt);

EstimatePlan build_product_plan(const DiscreteDistribution& dist, int axis_i,
                                int axis_j, const FunctionSpec& f,
                                const FunctionSpec& g, const FourierOptions& opt);

EstimateReport execute_plan(const EstimatePlan& plan, ShotSampler& rng);

// E[f(X_axis)] by Fourier decomposition + amplitude estimation.
EstimateReport fourier_qmci(const DiscreteDistribution& dist, int axis,
                            const FunctionSpec& f, const FourierOptions& opt,
                            ShotSampler& rng);

// E[f(X_i) g(X_j)] including the constant and single-series cross terms of the
// product expansion.
EstimateReport fourier_qmci_product(const DiscreteDistribution& dist, int axis_i,
                                    int axis_j, const FunctionSpec& f,
                                    const FunctionSpec& g, const FourierOptions& opt,
                                    ShotSampler& rng);

// Plain Monte-Carlo baseline: mean of f over q iid draws from the marginal.
EstimateReport classical_mci(const DiscreteDistribution& dist, int axis,
                             const FunctionSpec& f, std::int64_t q, ShotSampler& rng);

// Mean estimator that compresses the support into a narrow rotation window of
// half-width `scale` around pi/4 and inverts the amplitude linearly. scale = 0
// picks the default q^(-1/3). Bias shrinks with scale^2 while the amplitude
// error inflates by 1/scale, which caps the convergence rate at q^(-2/3).
EstimateReport rescaled_qmci(const DiscreteDistribution& dist, int axis,
                             std::int64_t q, const std::string& qae,
                             ShotSampler& rng, double scale = 0.0);

}  // namespace fqmci
