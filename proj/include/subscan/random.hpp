#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace subscan {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for sub-stream `index` of `stream` under a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Portable random source: std::mt19937_64 with distribution code written
/// here, since the standard library distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (engine_() >> 63) != 0; }
  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// `count` distinct indices from [0, population) in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count);
  std::vector<std::size_t> sample_with_replacement(std::size_t population, std::size_t count);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace subscan
