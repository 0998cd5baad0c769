#include "detreact/topology.hpp"

#include <algorithm>

namespace detreact {

namespace {

std::string channel_suffix(const PortDecl& port, std::uint32_t index) {
  return port.width == 1 ? std::string{} : "[" + std::to_string(index) + "]";
}

template <class Ref>
bool contains(const std::vector<Ref>& v, const Ref& r) {
  return std::find(v.begin(), v.end(), r) != v.end();
}

}  // namespace

// -- Topology -----------------------------------------------------------------

ChannelId Topology::channel_of(PortId port_id, std::uint32_t index) const {
  if (!port_id.valid() || port_id.index() >= ports_.size()) {
    throw CompositionError("unresolved port reference");
  }
  const auto& p = ports_[port_id.index()];
  if (index >= p.width) {
    throw CompositionError("channel " + std::to_string(index) + " out of range for " +
                           port_path(port_id) + " of width " + std::to_string(p.width));
  }
  return ChannelId{p.first_channel.value + index};
}

std::optional<ReactorId> Topology::find_reactor(std::string_view name) const {
  for (std::size_t i = 0; i < reactors_.size(); ++i) {
    if (reactors_[i].name == name) return ReactorId{i};
  }
  return std::nullopt;
}

std::optional<PortId> Topology::find_port(ReactorId reactor, std::string_view name) const {
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    if (ports_[i].reactor == reactor && ports_[i].name == name) return PortId{i};
  }
  return std::nullopt;
}

std::string Topology::reaction_path(ReactionId id) const {
  const auto& r = reaction(id);
  return reactor_path(r.reactor) + "." + std::to_string(r.lexical_index);
}

std::string Topology::port_path(PortId id) const {
  const auto& p = port(id);
  return reactor_path(p.reactor) + "." + p.name;
}

std::string Topology::channel_path(ChannelId id) const {
  const auto& c = channel(id);
  return port_path(c.port) + channel_suffix(port(c.port), c.index);
}

std::string Topology::action_path(ActionId id) const {
  const auto& a = action(id);
  return reactor_path(a.reactor) + "." + a.name;
}

std::uint64_t Topology::structure_digest() const {
  hashing::Fnv1a h;
  auto str = [&](std::string_view s) {
    h.update_u64(s.size());
    h.update(s);
  };
  h.update_u64(reactors_.size());
  for (const auto& r : reactors_) {
    str(r.name);
    for (const auto& [k, v] : r.parameters) {
      str(k);
      h.update_u64(static_cast<std::uint64_t>(v));
    }
  }
  h.update_u64(ports_.size());
  for (const auto& p : ports_) {
    h.update_u64(p.reactor.value);
    str(p.name);
    h.update_u64(static_cast<std::uint64_t>(p.direction));
    h.update_u64(p.width);
  }
  for (const auto& t : timers_) {
    h.update_u64(t.reactor.value);
    str(t.name);
    h.update_u64(static_cast<std::uint64_t>(t.offset.count()));
    h.update_u64(t.period ? static_cast<std::uint64_t>(t.period->count()) : ~0ULL);
  }
  for (const auto& a : actions_) {
    h.update_u64(a.reactor.value);
    str(a.name);
    h.update_u64(static_cast<std::uint64_t>(a.kind));
    h.update_u64(static_cast<std::uint64_t>(a.min_delay.count()));
  }
  for (const auto& r : reactions_) {
    h.update_u64(r.reactor.value);
    h.update_u64(r.lexical_index);
    for (const auto& t : r.triggers) {
      h.update_u64(t.index());
      std::visit(
          [&](const auto& ref) {
            if constexpr (std::is_same_v<std::decay_t<decltype(ref)>, Builtin>) {
              h.update_u64(static_cast<std::uint64_t>(ref));
            } else {
              h.update_u64(ref.value);
            }
          },
          t);
    }
    for (const auto& u : r.uses) h.update_u64(u.value);
    for (const auto& e : r.effects) {
      h.update_u64(e.index());
      std::visit([&](const auto& ref) { h.update_u64(ref.value); }, e);
    }
  }
  for (const auto& c : connections_) {
    h.update_u64(c.from.value);
    h.update_u64(c.to.value);
  }
  return hashing::mix(h.value());
}

// -- ReactionBuilder ------------------------------------------------------------

ReactionBuilder::ReactionBuilder(Builder* builder, ReactorId reactor, std::string name)
    : builder_(builder) {
  decl_.reactor = reactor;
  decl_.name = std::move(name);
}

ReactionId ReactionBuilder::body(ReactionBody fn) {
  auto& topo = builder_->topology_;
  auto& owner = topo.reactors_.at(decl_.reactor.index());
  decl_.lexical_index = static_cast<std::uint32_t>(owner.reactions.size() + 1);
  const std::string where = owner.name + "." + std::to_string(decl_.lexical_index);

  if (!fn) throw CompositionError("reaction " + where + " has no body");
  if (decl_.triggers.empty()) throw CompositionError("reaction " + where + " declares no triggers");

  auto check_port = [&](PortId id, PortDirection dir, const char* role) {
    if (!id.valid() || id.index() >= topo.ports_.size()) {
      throw CompositionError("reaction " + where + ": unresolved " + role);
    }
    const auto& p = topo.ports_[id.index()];
    if (p.reactor != decl_.reactor) {
      throw CompositionError("reaction " + where + ": " + role + " " + topo.port_path(id) +
                             " belongs to another reactor");
    }
    if (p.direction != dir) {
      throw CompositionError("reaction " + where + ": " + role + " " + topo.port_path(id) +
                             " has the wrong direction");
    }
  };
  auto check_action = [&](ActionId id, const char* role) -> const ActionDecl& {
    if (!id.valid() || id.index() >= topo.actions_.size()) {
      throw CompositionError("reaction " + where + ": unresolved " + role);
    }
    const auto& a = topo.actions_[id.index()];
    if (a.reactor != decl_.reactor) {
      throw CompositionError("reaction " + where + ": " + role + " " + topo.action_path(id) +
                             " belongs to another reactor");
    }
    return a;
  };

  for (const auto& t : decl_.triggers) {
    if (const auto* p = std::get_if<PortId>(&t)) {
      check_port(*p, PortDirection::input, "trigger");
    } else if (const auto* a = std::get_if<ActionId>(&t)) {
      check_action(*a, "trigger");
    } else if (const auto* tm = std::get_if<TimerId>(&t)) {
      if (!tm->valid() || tm->index() >= topo.timers_.size() ||
          topo.timers_[tm->index()].reactor != decl_.reactor) {
        throw CompositionError("reaction " + where + ": timer trigger belongs to another reactor");
      }
    }
  }
  for (const auto& u : decl_.uses) check_port(u, PortDirection::input, "dependency");
  for (const auto& e : decl_.effects) {
    if (const auto* p = std::get_if<PortId>(&e)) {
      check_port(*p, PortDirection::output, "effect");
    } else {
      const auto& a = check_action(std::get<ActionId>(e), "effect");
      if (a.kind != ActionKind::logical) {
        throw CompositionError("reaction " + where + ": physical action " + a.name +
                               " cannot be a declared effect");
      }
    }
  }

  decl_.body = std::move(fn);
  ReactionId id{topo.reactions_.size()};
  topo.reactions_.push_back(std::move(decl_));
  owner.reactions.push_back(id);
  return id;
}

// -- ReactorBuilder -------------------------------------------------------------

const std::string& ReactorBuilder::name() const {
  return builder_->topology_.reactors_.at(id_.index()).name;
}

std::optional<std::size_t> ReactorBuilder::bank_index() const {
  return builder_->topology_.reactors_.at(id_.index()).bank_index;
}

void ReactorBuilder::claim_name(const std::string& element) {
  if (element.empty()) throw CompositionError("empty element name in reactor " + name());
  auto& names = builder_->elements_.at(id_.index()).names;
  if (contains(names, element)) {
    throw CompositionError("duplicate name " + name() + "." + element);
  }
  names.push_back(element);
}

PortId ReactorBuilder::add_port(std::string port_name, PortDirection dir, std::uint32_t width,
                                std::type_index type) {
  if (width == 0) throw CompositionError("port " + name() + "." + port_name + " has width 0");
  claim_name(port_name);
  auto& topo = builder_->topology_;
  PortId id{topo.ports_.size()};
  ChannelId first{topo.channels_.size()};
  topo.ports_.push_back(PortDecl{id_, std::move(port_name), dir, width, type, first});
  for (std::uint32_t i = 0; i < width; ++i) {
    topo.channels_.push_back(ChannelDecl{id, i});
    topo.upstream_.emplace_back();
    topo.downstream_.emplace_back();
  }
  builder_->elements_[id_.index()].ports.push_back(id);
  return id;
}

ActionId ReactorBuilder::add_action(std::string action_name, ActionKind kind, Duration min_delay,
                                    std::type_index type) {
  if (min_delay < Duration::zero()) {
    throw CompositionError("action " + name() + "." + action_name + " has a negative delay");
  }
  claim_name(action_name);
  auto& topo = builder_->topology_;
  ActionId id{topo.actions_.size()};
  topo.actions_.push_back(ActionDecl{id_, std::move(action_name), kind, min_delay, type});
  builder_->elements_[id_.index()].actions.push_back(id);
  return id;
}

Timer ReactorBuilder::timer(std::string timer_name, Duration offset, std::optional<Duration> period) {
  if (offset < Duration::zero()) {
    throw CompositionError("timer " + name() + "." + timer_name + " has a negative offset");
  }
  if (period && *period <= Duration::zero()) {
    throw CompositionError("timer " + name() + "." + timer_name +
                           " has a non-positive period; omit the period for a one-shot timer");
  }
  if (period && !checked_add(offset, *period)) {
    throw CompositionError("timer " + name() + "." + timer_name + " overflows logical time");
  }
  claim_name(timer_name);
  auto& topo = builder_->topology_;
  TimerId id{topo.timers_.size()};
  topo.timers_.push_back(TimerDecl{id_, std::move(timer_name), offset, period});
  builder_->elements_[id_.index()].timers.push_back(id);
  return Timer{id};
}

void ReactorBuilder::parameter(std::string param, std::int64_t value) {
  auto& params = builder_->topology_.reactors_.at(id_.index()).parameters;
  for (const auto& [k, v] : params) {
    if (k == param) throw CompositionError("duplicate parameter " + name() + "." + param);
  }
  params.emplace_back(std::move(param), value);
}

ReactionBuilder ReactorBuilder::reaction(std::string reaction_name) {
  return ReactionBuilder(builder_, id_, std::move(reaction_name));
}

// -- Builder ----------------------------------------------------------------------

ReactorBuilder Builder::reactor(std::string name) {
  if (name.empty()) throw CompositionError("reactor name must not be empty");
  if (!reactor_names_.insert(name).second) throw CompositionError("duplicate reactor name " + name);
  ReactorId id{topology_.reactors_.size()};
  topology_.reactors_.push_back(ReactorDecl{std::move(name), std::nullopt, {}, {}});
  elements_.emplace_back();
  return ReactorBuilder(this, id);
}

ReactorBuilder Builder::bank_member(const std::string& name, std::size_t index) {
  ReactorBuilder member = reactor(name + "[" + std::to_string(index) + "]");
  topology_.reactors_[member.id().index()].bank_index = index;
  member.parameter("bank_index", static_cast<std::int64_t>(index));
  return member;
}

void Builder::check_bank_uniform(ReactorId first, std::size_t width) const {
  const auto& t = topology_;
  const auto& e0 = elements_.at(first.index());
  const auto& r0 = t.reactors_.at(first.index());
  for (std::size_t i = 1; i < width; ++i) {
    const std::size_t m = first.index() + i;
    const auto& e = elements_.at(m);
    const auto& r = t.reactors_.at(m);
    bool same = e.names == e0.names && e.ports.size() == e0.ports.size() &&
                e.timers.size() == e0.timers.size() && e.actions.size() == e0.actions.size() &&
                r.reactions.size() == r0.reactions.size();
    for (std::size_t k = 0; same && k < e.ports.size(); ++k) {
      const auto& a = t.ports_[e0.ports[k].index()];
      const auto& b = t.ports_[e.ports[k].index()];
      same = a.direction == b.direction && a.width == b.width && a.type == b.type;
    }
    if (!same) {
      throw CompositionError("bank member " + r.name + " differs structurally from " + r0.name);
    }
  }
}

void Builder::connect(ChannelId from, ChannelId to) {
  auto& t = topology_;
  if (!from.valid() || !to.valid() || from.index() >= t.channels_.size() ||
      to.index() >= t.channels_.size()) {
    throw CompositionError("unresolved channel in connection");
  }
  const auto& src = t.ports_[t.channels_[from.index()].port.index()];
  const auto& dst = t.ports_[t.channels_[to.index()].port.index()];
  if (src.direction != PortDirection::output || dst.direction != PortDirection::input) {
    throw CompositionError("connection " + t.channel_path(from) + " -> " + t.channel_path(to) +
                           " must go from an output to an input");
  }
  if (src.type != dst.type) {
    throw CompositionError("connection " + t.channel_path(from) + " -> " + t.channel_path(to) +
                           " joins ports of different types");
  }
  auto& up = t.upstream_[to.index()];
  if (up.valid()) {
    throw CompositionError("multiple writers for " + t.channel_path(to) + ": " +
                           t.channel_path(up) + " and " + t.channel_path(from));
  }
  up = from;
  t.downstream_[from.index()].push_back(to);
  t.connections_.push_back(Connection{from, to});
}

void Builder::connect_ports(PortId from, PortId to) {
  const auto& t = topology_;
  const auto w_from = t.port(from).width;
  const auto w_to = t.port(to).width;
  if (w_from != w_to) {
    throw CompositionError("width mismatch connecting " + t.port_path(from) + " (width " +
                           std::to_string(w_from) + ") to " + t.port_path(to) + " (width " +
                           std::to_string(w_to) + ")");
  }
  for (std::uint32_t i = 0; i < w_from; ++i) connect(t.channel_of(from, i), t.channel_of(to, i));
}

Topology Builder::build() {
  Topology out = std::move(topology_);
  topology_ = Topology{};
  elements_.clear();
  reactor_names_.clear();
  return out;
}

Topology build_topology(const std::function<void(Builder&)>& program) {
  Builder b;
  program(b);
  return b.build();
}

}  // namespace detreact
