#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lens {

/// Seeded random source; every draw is derived from raw std::mt19937_64 output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Poisson-distributed count (Knuth's multiplication method; small means only).
  std::uint32_t poisson(double mean);

  bool bernoulli(double p) { return uniform01() < p; }

  /// Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent seed for a numbered sub-stream (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lens
