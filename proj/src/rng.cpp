#include "spinglass/rng.hpp"

#include <cmath>

namespace spinglass {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_state(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ splitmix64(stream + 0x123456789abcdefull));
  return s;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), eng_(derive_state(seed, stream)) {}

std::uint64_t RngStream::next_u64() { return eng_(); }

double RngStream::next_uniform() {
  // top 53 bits; shifted into (0,1) to keep log() safe
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
}

double RngStream::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_uniform() - 1.0;
    v = 2.0 * next_uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * factor;
  has_cached_ = true;
  return u * factor;
}

double RngStream::next_exponential() { return -std::log(next_uniform()); }

RngStream RngStream::substream(std::uint64_t id) const {
  return RngStream(seed_, splitmix64(stream_ * 0x9e3779b97f4a7c15ull + id + 1));
}

}  // namespace spinglass
