#pragma once

// Uniform sampling on S^{n-1} by normalizing a standard Gaussian vector.
//
// Every sample is keyed by (seed, index), so sample i is the same whether it
// is drawn alone, in order, or from any thread of a parallel run.

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "cubeshadow/errors.hpp"
#include "cubeshadow/geometry.hpp"

namespace cubeshadow {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based bit generator: output j of stream `key` is
/// mix(key + (j+1) * golden). Satisfies UniformRandomBitGenerator.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt = 0)
      : key_(splitmix64_mix(splitmix64_mix(splitmix64_mix(seed) ^ index) ^ attempt)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    counter_ += kGolden;
    return splitmix64_mix(key_ + counter_);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline constexpr int kMaxSampleRetries = 100;

/// Sample `index` of the uniform sphere stream `seed` in dimension n.
inline UnitVector sample_sphere(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw InvalidDimension("sample_sphere: n must be >= 1");
  std::vector<double> g(n);
  for (int attempt = 0; attempt < kMaxSampleRetries; ++attempt) {
    CounterStream stream(seed, index, static_cast<std::uint64_t>(attempt));
    std::normal_distribution<double> normal;
    for (double& x : g) x = normal(stream);
    if (l2_norm(g) >= 1e-8) return UnitVector::normalize(std::move(g));
  }
  throw DegenerateSample("sample_sphere: Gaussian vector stayed below 1e-8 after retries");
}

}  // namespace cubeshadow
