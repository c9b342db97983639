#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fqmci/grid.hpp"

namespace fqmci {

// Probability masses over the product of per-axis grids. The flat list is
// row-major: axis 0 varies slowest, the last axis fastest. Immutable after
// construction, so concurrent readers need no locking.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<GridSupport> axes, Eigen::ArrayXd probs);

  int dimensions() const { return static_cast<int>(axes_.size()); }
  const GridSupport& axis(int j) const;
  const std::vector<GridSupport>& axes() const { return axes_; }
  const Eigen::ArrayXd& probs() const { return probs_; }
  std::int64_t flat_size() const { return probs_.size(); }

  double prob(const std::vector<std::int64_t>& index) const;
  std::int64_t flat_index(const std::vector<std::int64_t>& index) const;
  int total_qubits() const;

 private:
  std::vector<GridSupport> axes_;
  Eigen::ArrayXd probs_;
};

// Sums out every axis except `axis`.
DiscreteDistribution marginal(const DiscreteDistribution& dist, int axis);

// Exact E[prod_k fns[k](X_{axes[k]})] by direct summation over all outcomes.
// `axes` must be distinct and in range; fns.size() must equal axes.size().
double brute_force_expectation(const DiscreteDistribution& dist,
                               const std::vector<int>& axes,
                               const std::vector<std::function<double(double)>>& fns);

// Key-value text format; see README for the grammar. The loader validates
// shape, non-negativity, and normalization to 1 within 1e-12.
DiscreteDistribution load_distribution(const std::string& path);
void save_distribution(const DiscreteDistribution& dist, const std::string& path);

}  // namespace fqmci
