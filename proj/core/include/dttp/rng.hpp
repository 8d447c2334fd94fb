#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dttp {

/// 64-bit FNV-1a over a byte string. Used for config digests, strategy-id
/// mixing and output-file digests.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Combines seed material into a derived seed. Order-sensitive.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard and the bounded draws below avoid std::uniform_*_distribution,
/// whose outputs are implementation-defined; streams are therefore
/// bit-reproducible across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased integer in [lo, hi], rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());  // full range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return lo + static_cast<std::int64_t>(r % range);
  }

  /// Uniform double in [lo, hi) with 53 random mantissa bits.
  double uniform_real(double lo, double hi) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  bool chance(double p) { return uniform_real(0.0, 1.0) < p; }

  /// Fisher-Yates, one bounded draw per position.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct values from {1..n}, returned sorted ascending.
  /// Consumes exactly k bounded draws (partial Fisher-Yates).
  std::vector<int> sample_ids(int n, int k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dttp
