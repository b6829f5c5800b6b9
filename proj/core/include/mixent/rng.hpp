#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mixent {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Splittable counter-based random stream (xoshiro256** seeded through
/// SplitMix64). A stream is addressed by (seed, a, b, c); equal keys give
/// bit-identical draws regardless of which thread runs them, which is what
/// makes Monte-Carlo results independent of scheduling. Draw routines avoid
/// std::*_distribution on purpose: their output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
               std::uint64_t c = 0) {
    std::uint64_t st = seed;
    detail::splitmix64(st);
    st ^= a;
    detail::splitmix64(st);
    st ^= b;
    detail::splitmix64(st);
    st ^= c;
    for (auto& word : s_) word = detail::splitmix64(st);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl64(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Fixed-point multiply keeps the mapping
  /// platform independent.
  std::uint32_t uniform_index(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Circularly-symmetric complex Gaussian CN(0, 1): |z|^2 ~ Exp(1).
  std::complex<double> cnormal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  std::uint64_t s_[4];
};

/// Stream tags keeping every consumer of a master seed on its own substream.
namespace stream {
inline constexpr std::uint64_t kInput = 0x11;
inline constexpr std::uint64_t kNoise = 0x22;
inline constexpr std::uint64_t kChannel = 0x33;
inline constexpr std::uint64_t kBcjrInput = 0x44;
inline constexpr std::uint64_t kBcjrNoise = 0x55;
}  // namespace stream

/// Derives a child seed for an independent component (e.g. one per SNR point).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t st = seed;
  detail::splitmix64(st);
  st ^= salt;
  return detail::splitmix64(st);
}

}  // namespace mixent
