#include "fqmci/rng.hpp"

#include <random>
#include <stdexcept>

namespace fqmci {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t make_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed + kGolden) ^ (stream + 0x5851f42d4c957f2dull));
}

}  // namespace

ShotSampler::ShotSampler(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(make_key(seed, stream)) {}

std::uint64_t ShotSampler::next_u64() {
  counter_ += kGolden;
  return mix64(key_ ^ counter_);
}

double ShotSampler::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

ShotSampler ShotSampler::derive(std::uint64_t child) const {
  ShotSampler sub;
  sub.seed_ = seed_;
  sub.stream_ = child;
  sub.key_ = make_key(key_, child);
  return sub;
}

std::int64_t binomial_draw(ShotSampler& rng, std::int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("binomial_draw: n must be >= 0");
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (n <= 64) {
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < n; ++i) hits += rng.next_double() < p;
    return hits;
  }
  std::binomial_distribution<std::int64_t> dist(n, p);
  return dist(rng);
}

}  // namespace fqmci
