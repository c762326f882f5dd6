#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ksvrg {

// Counter-based 64-bit generator (splitmix64). The state advances by a fixed
// Weyl increment and the output is a bijective finalizer of the counter, so a
// stream is fully determined by its seed. Streams for one run are derived by
// split(): stream 0 drives inner-loop index draws, stream 1 drives
// without-replacement sampling / permutations, further tags are free for
// callers. split() derives from the construction seed, never from the current
// position, so the derived streams are independent of how much of the parent
// has been consumed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed), state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) without modulo bias (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  int next_index(int n) { return static_cast<int>(next_below(static_cast<std::uint64_t>(n))); }

  // Child stream `tag` of this generator's seed.
  SplitMix64 split(std::uint64_t tag) const {
    return SplitMix64(mix(seed_ ^ (0x9E3779B97F4A7C15ULL * (tag + 1))));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// First q entries of a partial Fisher-Yates shuffle of {0, ..., n-1}.
inline std::vector<int> sample_without_replacement(int q, int n, SplitMix64& rng) {
  if (n <= 0 || q < 0 || q > n)
    throw std::invalid_argument("sample_without_replacement: need 0 <= q <= n, n >= 1");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int j = 0; j < q; ++j) {
    const int r = j + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - j)));
    std::swap(pool[j], pool[r]);
  }
  pool.resize(static_cast<std::size_t>(q));
  return pool;
}

// Full Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<int> random_permutation(int n, SplitMix64& rng) {
  return sample_without_replacement(n, n, rng);
}

}  // namespace ksvrg
