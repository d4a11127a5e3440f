#pragma once

#include <cstdint>
#include <random>

namespace samplemine {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).  Used to derive independent
// child seeds from a master seed: stream k of seed s is splitmix64(s + k*GAMMA).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + stream * 0x9e3779b97f4a7c15ULL);
}

// Seeded 64-bit generator.  mt19937_64's output sequence is pinned bit-for-bit
// by the standard, and the bounded/unit draws below avoid the library
// distributions (whose mappings are implementation-defined), so every seeded
// run reproduces across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Unbiased draw from [0, n) via Lemire's multiply-reject method.
  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t threshold = -n % n;
      while (lo < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace samplemine
