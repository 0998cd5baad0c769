#include "detreact/tag.hpp"

#include <ostream>
#include <stdexcept>

namespace detreact {

std::optional<Duration> checked_add(Duration a, Duration b) noexcept {
  Duration::rep out{};
  if (__builtin_add_overflow(a.count(), b.count(), &out)) return std::nullopt;
  return Duration{out};
}

Tag Tag::delayed(Duration delay) const {
  if (delay <= Duration::zero()) return next_microstep();
  auto t = checked_add(time, delay);
  if (!t) throw std::overflow_error("logical time overflow scheduling " + std::to_string(delay.count()) +
                                    "ns after " + to_string(*this));
  return Tag{*t, 0};
}

std::string to_string(const Tag& tag) {
  return std::to_string(tag.time.count()) + "." + std::to_string(tag.microstep);
}

std::ostream& operator<<(std::ostream& os, const Tag& tag) { return os << to_string(tag); }

}  // namespace detreact
