#pragma once
// Seeded RNG streams. Every stochastic component derives its own mt19937_64
// stream from the scenario seed via splitmix64, so results do not depend on
// iteration order or on how many draws other components consume.

#include <cstdint>
#include <limits>
#include <random>

namespace gridmarket {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(base ^ splitmix64(tag)) + index);
}

// Stream tags for seed derivation; one per independent consumer.
namespace seed_tag {
constexpr std::uint64_t kAgent = 0xa6e57;
constexpr std::uint64_t kEngine = 0xe5617e;
constexpr std::uint64_t kMismatch = 0x715a7c;
constexpr std::uint64_t kProfiles = 0x9f0f11e;
}  // namespace seed_tag

// Uniform double in [lo, hi) from the top 53 bits; identical on every
// platform, unlike std::uniform_real_distribution.
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// Unbiased index in [0, n); n must be at least 1.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t span = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<std::size_t>(v % span);
}

// Box-Muller; one value per call so stream consumption stays predictable.
inline double normal(std::mt19937_64& rng, double mean, double stddev) {
  double u1 = uniform_real(rng, 0.0, 1.0);
  while (u1 <= 0.0) u1 = uniform_real(rng, 0.0, 1.0);
  const double u2 = uniform_real(rng, 0.0, 1.0);
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * 3.14159265358979323846 * u2);
  return mean + stddev * z;
}

}  // namespace gridmarket
