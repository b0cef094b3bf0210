#pragma once

#include <cstdint>
#include <random>

namespace autolike {

// splitmix64; used to derive independent substream seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

// Substream indices are fixed so adding a consumer never shifts the others.
enum class Stream : std::uint64_t {
  Environment = 1,
  Classifier = 2,
  Policy = 3,
  Catalog = 4,
};

inline Rng make_stream(std::uint64_t seed, Stream which) {
  return Rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(which))));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double normal(Rng& rng, double sigma) {
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

// Beta(a, b) via two gamma draws.
inline double beta(Rng& rng, double a, double b) {
  double x = std::gamma_distribution<double>(a, 1.0)(rng);
  double y = std::gamma_distribution<double>(b, 1.0)(rng);
  double s = x + y;
  return s > 0.0 ? x / s : 0.5;
}

}  // namespace autolike
