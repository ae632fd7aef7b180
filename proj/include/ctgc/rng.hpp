#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ctgc {

// Deterministic random stream with a fixed layout so that seeded runs
// reproduce bit-for-bit across platforms: mt19937_64 raw draws, uniforms as
// (x >> 11) * 2^-53, and gaussians from Box-Muller pairs consumed in order
// (cos first, sin cached).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  // independent stream for one trial of a batch experiment
  static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(mix(master_seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ctgc
