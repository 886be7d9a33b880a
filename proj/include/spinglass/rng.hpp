#pragma once

#include <cstdint>
#include <random>

namespace spinglass {

// Seeded random stream with counter-based substream derivation.
// Identical (seed, stream) pairs reproduce identical draws; distinct
// stream ids give statistically independent substreams, so parallel
// Monte Carlo stays reproducible regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on (0,1), 53-bit resolution.
  double next_uniform();
  // Standard normal via the Marsaglia polar method (pinned algorithm,
  // independent of the standard library's normal_distribution).
  double next_gaussian();
  // Exponential(1).
  double next_exponential();

  RngStream substream(std::uint64_t id) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 eng_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace spinglass
