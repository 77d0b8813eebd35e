#pragma once

#include <cstdint>
#include <random>

namespace lamcoal {

/// Seed of replicate `index` derived from a master seed (SplitMix64 finaliser),
/// so every replicate owns an independent, thread-count-independent stream.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform(); }
  /// Exponential with the given rate.
  double exponential(double rate);
  /// Poisson with the given mean.
  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lamcoal
