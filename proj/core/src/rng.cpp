#include "lens/rng.hpp"

#include <cmath>
#include <limits>

#include "lens/error.hpp"

namespace lens {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) {
    throw ValidationError("below() needs a positive bound");
  }
  // Rejection sampling on the top of the range.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) {
    x = engine_();
  }
  return x % n;
}

std::uint32_t Rng::poisson(double mean) {
  if (mean <= 0.0) {
    return 0;
  }
  const double limit = std::exp(-mean);
  std::uint32_t k = 0;
  double p = uniform01();
  while (p > limit) {
    ++k;
    p *= uniform01();
  }
  return k;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace lens
