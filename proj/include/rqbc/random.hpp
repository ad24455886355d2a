#pragma once

#include <cstdint>
#include <random>

namespace rqbc {

/// Seedable deterministic generator injected into every stochastic operation.
///
/// Instances are cheap to create and are not meant to be shared between
/// threads; parallel callers derive one stream per work item with
/// `RandomSource::derive(seed, index)`.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Independent stream for (seed, stream) via a splitmix64 mix of both.
  static RandomSource derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  double normal();

  std::uint8_t byte() { return static_cast<std::uint8_t>(next_u64() >> 56); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rqbc
