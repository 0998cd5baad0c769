#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "detreact/tag.hpp"
#include "detreact/value.hpp"

namespace detreact {

enum class TriggerKind : std::uint8_t { startup, shutdown, timer, action };

struct TriggerKey {
  TriggerKind kind;
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(const TriggerKey&, const TriggerKey&) = default;
};

struct Event {
  TriggerKey key;
  Value value;
};

/// Pending events grouped by tag. Not synchronized.
class EventQueue {
 public:
  /// Adds an event; an event with the same key at the same tag is replaced.
  void push(const Tag& tag, TriggerKey key, Value value);

  [[nodiscard]] bool empty() const noexcept { return events_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] std::optional<Tag> next_tag() const;

  /// Events at `tag` in insertion order, or nullptr.
  [[nodiscard]] const std::vector<Event>* at(const Tag& tag) const;

  /// Removes and returns the events at the earliest tag.
  std::pair<Tag, std::vector<Event>> pop();

  /// Drops every event.
  void clear() noexcept;

 private:
  std::map<Tag, std::vector<Event>> events_;
  std::size_t count_ = 0;
};

}  // namespace detreact
