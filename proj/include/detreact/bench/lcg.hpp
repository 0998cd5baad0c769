#pragma once

#include <cstdint>

namespace detreact::bench {

/// 64-bit linear congruential generator (Knuth's MMIX constants). Output
/// uses the high bits, which have the longest period.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_ >> 32;
  }

  /// Uniform in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

  /// Uniform in [0, 1).
  double unit() noexcept { return static_cast<double>(next()) / 4294967296.0; }

 private:
  std::uint64_t state_;
};

/// Seed for stream `index` derived from a benchmark seed.
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

}  // namespace detreact::bench
