#pragma once

// Seeded randomness with a fully specified output sequence. std::mt19937_64
// is pinned by the standard; the bounded draw and the shuffle are spelled
// out here because std::uniform_int_distribution and std::shuffle are not.

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace gapamp {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed of trial t under a master seed. Trials are reproducible on their own,
// whatever thread runs them.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(splitmix64(master) ^ (trial * 0xd1b54a32d192ed03ull));
}

// Uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  if (rem == 0) return rng() % bound;
  const std::uint64_t limit = 0 - rem;  // largest multiple of bound, mod 2^64
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Fisher-Yates, uniform over all size! orders.
template <typename T>
void fisher_yates(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Uniform permutation of 1..n as a vector p with p[j] = image of j+1.
inline std::vector<std::uint32_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 1u);
  fisher_yates(rng, p);
  return p;
}

}  // namespace gapamp
