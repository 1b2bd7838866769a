#pragma once

#include <cstdint>

namespace incfl {

// splitmix64 finalizer. Derives independent stream seeds from a master seed
// so that serial and parallel runs of the same experiment agree.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform double in [0,1) built from the top 53 bits of a 64-bit draw.
// std::uniform_real_distribution is implementation-defined; this is not.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace incfl
