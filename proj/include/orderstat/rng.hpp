// Seeding and uniform draws shared by every Monte Carlo path.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace orderstat {

using Engine = std::mt19937_64;

// Seed used by the CLI when --seed is not given.
inline constexpr std::uint64_t kDefaultSeed = 20240611;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream derivation: each (base, tag...) tuple names its own
// independent stream, so trials can run in any order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t tag : tags) {
    h = splitmix64(h ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
  }
  return h;
}

inline Engine make_engine(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  return Engine(derive_seed(base, tags));
}

// Uniform double in [0, 1) from the top 53 bits; identical on every
// standard library, unlike std::uniform_real_distribution.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace orderstat
