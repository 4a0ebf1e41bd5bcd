#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace raven {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-problem seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

inline int uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  return static_cast<int>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
}

template <typename T>
const T& pick(Rng& rng, std::span<const T> values) {
  return values[static_cast<std::size_t>(uniform_index(rng, values.size()))];
}

inline bool coin(Rng& rng) { return uniform_index(rng, 2) == 1; }

}  // namespace raven
