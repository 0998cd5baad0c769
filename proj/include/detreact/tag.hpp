#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace detreact {

/// Logical durations and physical clock readings, in nanoseconds.
using Duration = std::chrono::nanoseconds;

/// Physical time points come from a monotonic clock.
using PhysicalClock = std::chrono::steady_clock;
using TimePoint = PhysicalClock::time_point;

/// A point on the superdense logical timeline.
///
/// Tags are ordered lexicographically: first by time, then by microstep.
/// Microsteps order logically simultaneous rounds that share a time value.
struct Tag {
  Duration time{0};
  std::uint64_t microstep{0};

  friend constexpr auto operator<=>(const Tag&, const Tag&) = default;

  /// The tag after this one at the same time value.
  [[nodiscard]] constexpr Tag next_microstep() const noexcept {
    return Tag{time, microstep + 1};
  }

  /// Tag of an event scheduled `delay` after this tag. A zero delay yields
  /// the next microstep, a positive delay resets the microstep to 0.
  /// Throws std::overflow_error if the time value would overflow.
  [[nodiscard]] Tag delayed(Duration delay) const;
};

/// Adds two durations, returning nullopt on signed overflow.
[[nodiscard]] std::optional<Duration> checked_add(Duration a, Duration b) noexcept;

/// "<time_ns>.<microstep>", the form used in trace files.
[[nodiscard]] std::string to_string(const Tag& tag);
std::ostream& operator<<(std::ostream& os, const Tag& tag);

}  // namespace detreact
