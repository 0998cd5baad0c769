#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "detreact/topology.hpp"

namespace detreact {

/// One concrete channel of a (multi)port.
struct PortInstance {
  PortId port;
  std::uint32_t index;
  ChannelId channel;
  friend bool operator==(const PortInstance&, const PortInstance&) = default;
};

using PortList = std::vector<PortInstance>;

/// A port, or the same port across all members of a bank, as it appears on
/// one side of a connection statement.
struct PortGroup {
  std::vector<PortId> members;  // bank order
  bool interleaved = false;
};

template <class Handle>
[[nodiscard]] PortGroup ports(const Handle& port) {
  return PortGroup{{port.id()}, false};
}

/// The port `member` of every element of `bank`.
template <class Member, class Handle>
[[nodiscard]] PortGroup ports(const std::vector<Member>& bank, Handle Member::*member) {
  PortGroup g;
  g.members.reserve(bank.size());
  for (const auto& m : bank) g.members.push_back((m.*member).id());
  return g;
}

/// Port-major unfolding: all channel 0 instances across the bank first.
[[nodiscard]] inline PortGroup interleaved(PortGroup g) {
  g.interleaved = true;
  return g;
}

/// Flattens the groups into channel instances, concatenated in order.
/// Default order is bank-major; interleaved groups are port-major.
[[nodiscard]] PortList unfold(const Topology& topology, std::span<const PortGroup> groups);

/// Connects the unfolded lists element-wise. Without broadcast the sizes
/// must match; with broadcast the lhs is repeated and |rhs| must be a
/// multiple of |lhs|. Returns the connections added.
std::vector<Connection> connect(Builder& builder, std::span<const PortGroup> lhs,
                                std::span<const PortGroup> rhs, bool broadcast = false);

inline std::vector<Connection> connect(Builder& builder, std::initializer_list<PortGroup> lhs,
                                       std::initializer_list<PortGroup> rhs,
                                       bool broadcast = false) {
  return connect(builder, std::span<const PortGroup>(lhs.begin(), lhs.size()),
                 std::span<const PortGroup>(rhs.begin(), rhs.size()), broadcast);
}

/// "src.out[0] -> wrk[0].in", one line per connection in declaration order.
[[nodiscard]] std::string format_connections(const Topology& topology);

}  // namespace detreact
