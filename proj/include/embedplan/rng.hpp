#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace embedplan {

/// SplitMix64. Used everywhere randomness is needed: it is tiny, fast and, unlike
/// the std:: distributions, produces identical streams on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  /// Log-uniform integer in [lo, hi].
  std::uint64_t next_log_uniform(std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo) return lo;
    double u = next_unit();
    double v = std::exp(std::log(static_cast<double>(lo)) +
                        u * (std::log(static_cast<double>(hi) + 1.0) -
                             std::log(static_cast<double>(lo))));
    auto r = static_cast<std::uint64_t>(v);
    if (r < lo) r = lo;
    if (r > hi) r = hi;
    return r;
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[next_below(items.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = next_below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

/// Stateless mix of several words into one; used to derive independent
/// deterministic values (e.g. embedding contents) from (seed, coordinates).
inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0,
                              std::uint64_t d = 0) {
  SplitMix64 rng(a ^ (b * 0x9e3779b97f4a7c15ull) ^ (c * 0xc2b2ae3d27d4eb4full) ^
                 (d * 0x165667b19e3779f9ull));
  return rng.next();
}

/// Deterministic value in [-1, 1) derived from a hash.
inline float hash_to_unit_float(std::uint64_t h) {
  return static_cast<float>(static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0);
}

}  // namespace embedplan
