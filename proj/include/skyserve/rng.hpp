#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace skyserve {

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Every stochastic component draws from its own stream keyed by
// (master seed, component name, iteration index), so a run is reproducible
// piece by piece and components can execute in any order or in parallel.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::string_view component,
                                 std::uint64_t index) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the name
  for (const char ch : component) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  std::uint64_t s = mix64(master);
  s = mix64(s ^ h);
  s = mix64(s ^ index);
  return s;
}

inline std::mt19937_64 rng_stream(std::uint64_t master,
                                  std::string_view component,
                                  std::uint64_t index) {
  return std::mt19937_64{derive_seed(master, component, index)};
}

// std::uniform_int_distribution and std::shuffle are implementation-defined;
// hand-rolled draws keep seeded runs byte-identical across standard libraries.

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % n;
}

// Double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class T>
inline void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace skyserve
