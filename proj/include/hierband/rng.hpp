#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hierband {

// Seed derivation for independent streams (replicates, folds): splitmix64
// of (seed, index) so that streams neither overlap nor depend on scheduling.
inline uint64_t split_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// mt19937_64 with explicit uniform/normal transforms so the byte stream is
/// a function of the seed alone (std::normal_distribution is
/// implementation-defined; Box-Muller here is not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  uint64_t next_u64() { return eng_(); }

  /// Uniform integer in [0, n).
  uint64_t below(uint64_t n) {
    // Lemire-style rejection to avoid modulo bias.
    uint64_t x, r;
    do {
      x = eng_();
      r = x % n;
    } while (x - r > uint64_t(0) - n);
    return r;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hierband
