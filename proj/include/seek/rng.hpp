#ifndef SEEK_RNG_HPP
#define SEEK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace seek {

// splitmix64 mixing step; used both for seed derivation and as the
// generator behind Rng. Self-contained so that identical seeds produce
// identical streams on every platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic stream seed for episode `index` of a suite.
inline std::uint64_t derive_seed(std::uint64_t suite_seed, std::uint64_t index) {
  return splitmix64(suite_seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

// Small deterministic PRNG (xoshiro-free, splitmix-driven counter stream).
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : state_(splitmix64(seed ^ 0xA5A5A5A5DEADBEEFULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n > 0.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller; one fresh pair per call keeps the
  // draw count per event fixed (important for replayable streams).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::uint64_t state_;
};

}  // namespace seek

#endif  // SEEK_RNG_HPP
