#include "detreact/patterns.hpp"

namespace detreact {

PortList unfold(const Topology& topology, std::span<const PortGroup> groups) {
  PortList out;
  for (const auto& g : groups) {
    if (g.members.empty()) throw CompositionError("empty port reference in connection");
    std::uint32_t width = 0;
    for (PortId p : g.members) {
      if (!p.valid() || p.index() >= topology.ports().size()) {
        throw CompositionError("unresolved port reference in connection");
      }
      const auto w = topology.port(p).width;
      if (width != 0 && w != width) {
        throw CompositionError("bank port " + topology.port_path(p) + " has width " +
                               std::to_string(w) + ", expected " + std::to_string(width));
      }
      width = w;
    }
    auto push = [&](PortId p, std::uint32_t c) {
      out.push_back(PortInstance{p, c, topology.channel_of(p, c)});
    };
    if (g.interleaved) {
      for (std::uint32_t c = 0; c < width; ++c) {
        for (PortId p : g.members) push(p, c);
      }
    } else {
      for (PortId p : g.members) {
        for (std::uint32_t c = 0; c < width; ++c) push(p, c);
      }
    }
  }
  return out;
}

std::vector<Connection> connect(Builder& builder, std::span<const PortGroup> lhs,
                                std::span<const PortGroup> rhs, bool broadcast) {
  const PortList left = unfold(builder.view(), lhs);
  const PortList right = unfold(builder.view(), rhs);
  if (broadcast) {
    if (right.size() % left.size() != 0) {
      throw CompositionError("broadcast width mismatch: left side has width " +
                             std::to_string(left.size()) + ", right side has width " +
                             std::to_string(right.size()) + " (not a multiple)");
    }
  } else if (left.size() != right.size()) {
    throw CompositionError("connection width mismatch: left side has width " +
                           std::to_string(left.size()) + ", right side has width " +
                           std::to_string(right.size()));
  }
  std::vector<Connection> made;
  made.reserve(right.size());
  for (std::size_t i = 0; i < right.size(); ++i) {
    const ChannelId from = left[i % left.size()].channel;
    builder.connect(from, right[i].channel);
    made.push_back(Connection{from, right[i].channel});
  }
  return made;
}

std::string format_connections(const Topology& topology) {
  std::string out;
  for (const auto& c : topology.connections()) {
    out += topology.channel_path(c.from);
    out += " -> ";
    out += topology.channel_path(c.to);
    out += '\n';
  }
  return out;
}

}  // namespace detreact
