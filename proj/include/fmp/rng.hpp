#pragma once

// Seeded random streams. The engine is std::mt19937_64 (fully specified by
// the standard); the distributions below are implemented here because the
// standard library's distributions are not reproducible across vendors.
//
// Streams are derived from (seed, stream name) so that adding a stream never
// perturbs the draws of an existing one. Bump kRngVersion whenever any
// derivation or distribution changes; it is recorded in generated instances.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace fmp {

inline constexpr int kRngVersion = 1;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// FNV-1a
inline constexpr std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_(seed), engine_(splitmix64(seed)) {}

  /// Independent sub-stream identified by name.
  static Rng stream(std::uint64_t seed, std::string_view name) {
    return Rng(splitmix64(seed) ^ hash_name(name));
  }

  /// Sub-stream identified by an index (restarts, instance positions).
  Rng split(std::uint64_t index) const { return Rng(splitmix64(base_ ^ splitmix64(index + 1))); }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do { x = next(); } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  int uniform_index(std::size_t n) { return static_cast<int>(uniform_int(0, static_cast<std::int64_t>(n) - 1)); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Triangular(lo, mode, hi) by inverse CDF.
  double triangular(double lo, double mode, double hi) {
    const double u = uniform01();
    const double f = (mode - lo) / (hi - lo);
    if (u < f) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
    return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[uniform_index(k)]);
  }

  /// k distinct elements of v in random order (k clipped to v.size()).
  template <typename T>
  std::vector<T> sample(std::vector<T> v, std::size_t k) {
    if (k > v.size()) k = v.size();
    for (std::size_t n = 0; n < k; ++n) std::swap(v[n], v[n + uniform_index(v.size() - n)]);
    v.resize(k);
    return v;
  }

 private:
  std::uint64_t base_;
  std::mt19937_64 engine_;
};

}  // namespace fmp
