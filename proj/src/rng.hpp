#pragma once

#include <cstddef>
#include <cstdint>

namespace uswarm {

// Platform-independent seeded PRNG (xoshiro256++ over a splitmix64-expanded
// seed). Engines hand each agent its own child stream keyed by structural
// indices, so results never depend on evaluation order or thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n); n must be > 0.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  // Independent stream derived from the original seed and a structural path.
  Rng child(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t sm = seed_;
    std::uint64_t h = splitmix64(sm);
    sm = h ^ (a * 0x9e3779b97f4a7c15ull);
    h = splitmix64(sm);
    sm = h ^ (b * 0xbf58476d1ce4e5b9ull);
    h = splitmix64(sm);
    sm = h ^ (c * 0x94d049bb133111ebull);
    return Rng(splitmix64(sm));
  }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
  std::uint64_t seed_;
};

}  // namespace uswarm
