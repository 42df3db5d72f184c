#pragma once
// msar/rng.hpp - portable counter-keyed random streams
//
// Every stochastic draw in the toolkit comes from a SplitMix64 stream whose
// seed is derived from a key path such as (master seed, run, target, look).
// Results therefore never depend on evaluation order or thread scheduling,
// and two scenarios evaluated with the same key path see the same draws.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <utility>

namespace msar {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a list of integer keys.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
  for (std::uint64_t k : keys) {
    h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

// Domain tags keep independent purposes of the same key path apart.
namespace stream {
inline constexpr std::uint64_t kInitialPosition = 0x1001;
inline constexpr std::uint64_t kDiffusion = 0x1002;
inline constexpr std::uint64_t kTargets = 0x2001;
inline constexpr std::uint64_t kLooks = 0x2002;
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Pair of independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() noexcept {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace msar
