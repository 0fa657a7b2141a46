#pragma once

// Reproducible random streams.
//
// Every stream is keyed by (master seed, path of indices), e.g.
// (seed, realization) or (seed, permutation, repetition, molecule). Keys are
// hashed with SplitMix64 finalizers, so a stream's contents depend only on its
// key and never on which thread or in which order it is consumed.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace molcomm::rng {

using Seed = std::uint64_t;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child key from a parent key and an index.
constexpr Seed derive(Seed parent, std::uint64_t index) noexcept {
  return mix64(parent ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

constexpr Seed derive(Seed parent, std::initializer_list<std::uint64_t> path) noexcept {
  Seed s = parent;
  for (auto i : path) s = derive(s, i);
  return s;
}

/// Stream tags keep independent consumers of one seed apart.
enum class StreamTag : std::uint64_t {
  Placement = 1,
  Molecules = 2,
};

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Stream(Seed key) noexcept : state_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal (Box-Muller; the second variate is cached).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Poisson variate. Inversion by multiplication for small means, Hormann's
  /// PTRS transformed rejection above.
  std::uint64_t poisson(double mean) noexcept;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace molcomm::rng
