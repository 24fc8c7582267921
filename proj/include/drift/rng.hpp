#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace drift {

// splitmix64 finalizer, used to derive independent stream seeds so that
// chunked Monte Carlo sums do not depend on thread scheduling.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Thin deterministic wrapper around mt19937_64. Every draw consumes a fixed
// number of engine words, so call sequences are reproducible across builds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform on [0,1) with 53-bit resolution
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // unbiased-enough integer draw via 128-bit multiply (n well below 2^32 here)
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  int sign() { return uniform01() < 0.5 ? -1 : +1; }

  // standard normal via Box-Muller, always two uniforms per call and no
  // cached spare: the draw order is a fixed function of the call sequence
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    // 1 - u1 lies in (0,1], keeping the log finite
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace drift
