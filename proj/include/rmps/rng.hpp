#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rmps {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream keyed by (seed, stream id).
///
/// Every Monte Carlo sample draws from its own stream, derived only from the
/// run seed and the sample index, so results do not depend on how samples are
/// distributed over workers.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(mix64(mix64(seed) ^ mix64(stream ^ 0x5851f42d4c957f2dULL))) {}

  /// A child stream; children of distinct (parent, tag) never coincide in practice.
  RandomStream split(std::uint64_t tag) { return RandomStream(engine_(), tag); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }
  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rmps
