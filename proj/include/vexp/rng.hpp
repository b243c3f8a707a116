#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vexp {

// splitmix64 finalizer; also used as the (seed, label) -> sub-seed rule.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sub-seed derivation rule: every module draws randomness from a generator
// seeded by derive_seed(master, label [, index]).  The rule is fixed so that
// reports are replayable from the master seed alone.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  return splitmix64(seed ^ fnv1a64(label));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                                 std::uint64_t index) {
  return splitmix64(derive_seed(seed, label) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::string_view label) {
  return Rng(derive_seed(seed, label));
}

inline Rng make_rng(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return Rng(derive_seed(seed, label, index));
}

}  // namespace vexp
