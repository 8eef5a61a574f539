#pragma once

// Counter-based random numbers: every variate is a pure function of
// (key, counter), so ensembles regenerate identically in any order.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace stochconv {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static constexpr counter_type apply(counter_type ctr, key_type key) noexcept {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

  static constexpr key_type key_from_seed(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Maps two 32-bit words to a double in the open interval (0, 1) with 53
/// random bits.
constexpr double open_unit_interval(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

/// Standard normal variate at a counter: Box-Muller, cosine branch, with
/// u1 from words 0-1 and u2 from words 2-3 of one Philox block.
inline double counter_normal(const Philox4x32::counter_type& ctr,
                             const Philox4x32::key_type& key) noexcept {
  const auto out = Philox4x32::apply(ctr, key);
  const double u1 = open_unit_interval(out[0], out[1]);
  const double u2 = open_unit_interval(out[2], out[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform integer in [0, n) at a counter (n > 0). Modulo bias is below
/// n / 2^64.
inline std::uint64_t counter_index(const Philox4x32::counter_type& ctr,
                                   const Philox4x32::key_type& key, std::uint64_t n) noexcept {
  const auto out = Philox4x32::apply(ctr, key);
  const std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
  return bits % n;
}

/// Sequential stream of uniforms drawn from consecutive Philox counters of
/// one (seed, stream) pair; reproducible on every platform, unlike the
/// standard library distributions.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t stream) noexcept
      : key_(Philox4x32::key_from_seed(seed)), stream_(stream) {}

  /// Uniform on (0, 1).
  double uniform() noexcept {
    const auto out = Philox4x32::apply(next_counter(), key_);
    return open_unit_interval(out[0], out[1]);
  }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::size_t integer(std::size_t lo, std::size_t hi) noexcept {
    return lo + static_cast<std::size_t>(counter_index(next_counter(), key_, hi - lo + 1));
  }
  double normal() noexcept { return counter_normal(next_counter(), key_); }

 private:
  Philox4x32::counter_type next_counter() noexcept {
    const std::uint64_t c = counter_++;
    return {static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32), stream_, 0x73747265u};
  }

  Philox4x32::key_type key_;
  std::uint32_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace stochconv
