#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>

namespace detreact {

/// Dense integer identifier scoped to one topology. The phantom `Kind`
/// parameter keeps ports, actions, reactions, etc. from being mixed up.
template <class Kind>
struct Id {
  static constexpr std::uint32_t invalid_value = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t value = invalid_value;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

  [[nodiscard]] constexpr bool valid() const noexcept { return value != invalid_value; }
  [[nodiscard]] constexpr std::size_t index() const noexcept { return value; }

  friend constexpr auto operator<=>(Id, Id) = default;
};

using ReactorId = Id<struct ReactorKind>;
using PortId = Id<struct PortKind>;
using ChannelId = Id<struct ChannelKind>;
using ActionId = Id<struct ActionKind_>;
using TimerId = Id<struct TimerKind>;
using ReactionId = Id<struct ReactionKind>;

}  // namespace detreact

template <class Kind>
struct std::hash<detreact::Id<Kind>> {
  std::size_t operator()(detreact::Id<Kind> id) const noexcept { return id.value; }
};
