#pragma once

#include <cstdint>

namespace fqmci {

// Counter-mode generator: each output is a hash of (key, counter), where the
// key mixes a global seed with a stream id. Any draw is a pure function of
// (seed, stream, counter), so replays are exact no matter how work is split
// across threads, and derived substreams never collide with their parent.
class ShotSampler {
 public:
  using result_type = std::uint64_t;

  ShotSampler(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_double();  // uniform in [0, 1)

  // Independent substream; children of distinct parents stay disjoint.
  ShotSampler derive(std::uint64_t child) const;

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  ShotSampler() = default;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Binomial(n, p) draw. Exact Bernoulli loop for small n, delegating to
// std::binomial_distribution for large n.
std::int64_t binomial_draw(ShotSampler& rng, std::int64_t n, double p);

}  // namespace fqmci
