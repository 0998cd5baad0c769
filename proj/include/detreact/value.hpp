#pragma once

#include <any>
#include <array>
#include <bit>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace detreact {

namespace hashing {

inline constexpr std::uint64_t fnv_offset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t fnv_prime = 0x100000001b3ULL;

/// splitmix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Streaming FNV-1a over bytes. Integers are fed little-endian so digests
/// do not depend on host byte order.
class Fnv1a {
 public:
  constexpr void update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= fnv_prime;
    }
  }

  constexpr void update_u64(std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (v >> (8 * i)) & 0xffU;
      state_ *= fnv_prime;
    }
  }

  [[nodiscard]] constexpr std::uint64_t value() const noexcept { return state_; }

 private:
  std::uint64_t state_ = fnv_offset;
};

[[nodiscard]] constexpr std::uint64_t combine(std::uint64_t seed, std::uint64_t v) noexcept {
  return mix(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

}  // namespace hashing

// Built-in value digests. User payload types provide their own
// `std::uint64_t value_digest(const T&)`, found by argument-dependent lookup.

template <std::integral T>
[[nodiscard]] constexpr std::uint64_t value_digest(T v) noexcept {
  return hashing::mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
}

[[nodiscard]] inline std::uint64_t value_digest(double v) noexcept {
  if (v == 0.0) v = 0.0;  // +0 and -0 compare equal
  return hashing::mix(std::bit_cast<std::uint64_t>(v) ^ 0x5bd1e995ULL);
}

[[nodiscard]] inline std::uint64_t value_digest(float v) noexcept {
  return value_digest(static_cast<double>(v));
}

[[nodiscard]] inline std::uint64_t value_digest(std::string_view s) noexcept {
  hashing::Fnv1a h;
  h.update(s);
  return hashing::mix(h.value());
}

[[nodiscard]] inline std::uint64_t value_digest(const std::string& s) noexcept {
  return value_digest(std::string_view{s});
}

template <class A, class B>
[[nodiscard]] std::uint64_t value_digest(const std::pair<A, B>& p);

template <class T>
[[nodiscard]] std::uint64_t value_digest(const std::vector<T>& v);

template <class T, std::size_t N>
[[nodiscard]] std::uint64_t value_digest(const std::array<T, N>& v);

template <class T>
concept Digestible = requires(const T& v) {
  { value_digest(v) } -> std::convertible_to<std::uint64_t>;
};

template <class A, class B>
std::uint64_t value_digest(const std::pair<A, B>& p) {
  return hashing::combine(value_digest(p.first), value_digest(p.second));
}

template <class T>
std::uint64_t value_digest(const std::vector<T>& v) {
  std::uint64_t h = hashing::mix(v.size());
  for (const auto& e : v) h = hashing::combine(h, value_digest(e));
  return h;
}

template <class T, std::size_t N>
std::uint64_t value_digest(const std::array<T, N>& v) {
  std::uint64_t h = hashing::mix(N);
  for (const auto& e : v) h = hashing::combine(h, value_digest(e));
  return h;
}

/// Immutable type-erased payload carried by ports and actions.
class Value {
 public:
  Value() = default;

  template <Digestible T>
  [[nodiscard]] static Value of(T v) {
    Value out;
    out.payload_ = std::move(v);
    out.digest_ = [](const std::any& a) -> std::uint64_t {
      return value_digest(*std::any_cast<T>(&a));
    };
    return out;
  }

  [[nodiscard]] bool has_value() const noexcept { return payload_.has_value(); }

  /// Typed access; nullptr if empty or of a different type.
  template <class T>
  [[nodiscard]] const T* get() const noexcept {
    return std::any_cast<T>(&payload_);
  }

  [[nodiscard]] std::uint64_t digest() const {
    return digest_ != nullptr ? digest_(payload_) : 0;
  }

  void reset() noexcept {
    payload_.reset();
    digest_ = nullptr;
  }

 private:
  std::any payload_;
  std::uint64_t (*digest_)(const std::any&) = nullptr;
};

}  // namespace detreact
