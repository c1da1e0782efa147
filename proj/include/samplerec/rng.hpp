// Seeded RNG wrapper. Uniform doubles are generated from raw engine output so
// that streams do not depend on libstdc++ distribution internals.
#pragma once

#include <cstdint>
#include <random>

#include "samplerec/types.hpp"

namespace samplerec {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform over the complex unit disk (radius and phase independent).
  Complex unit_disk() {
    const double r = std::sqrt(uniform());
    const double phi = kTwoPi * uniform();
    return Complex(r * std::cos(phi), r * std::sin(phi));
  }

  /// splitmix64 mix; derives independent stream seeds from (seed, stream id).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace samplerec
