#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <typeindex>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "detreact/errors.hpp"
#include "detreact/ids.hpp"
#include "detreact/tag.hpp"
#include "detreact/value.hpp"

namespace detreact {

class ReactionContext;
class Builder;
class ReactorBuilder;

enum class PortDirection : std::uint8_t { input, output };
enum class ActionKind : std::uint8_t { logical, physical };

/// Triggers that exist in every program: one startup event at tag (0, 0)
/// and one shutdown event one microstep after the last processed tag.
enum class Builtin : std::uint8_t { startup, shutdown };

inline constexpr Builtin startup = Builtin::startup;
inline constexpr Builtin shutdown = Builtin::shutdown;

// -- typed handles ------------------------------------------------------------

template <class T>
class Input {
 public:
  using value_type = T;
  Input() = default;
  [[nodiscard]] PortId id() const noexcept { return id_; }
  [[nodiscard]] std::uint32_t width() const noexcept { return width_; }

 private:
  friend class ReactorBuilder;
  Input(PortId id, std::uint32_t width) : id_(id), width_(width) {}
  PortId id_;
  std::uint32_t width_ = 0;
};

template <class T>
class Output {
 public:
  using value_type = T;
  Output() = default;
  [[nodiscard]] PortId id() const noexcept { return id_; }
  [[nodiscard]] std::uint32_t width() const noexcept { return width_; }

 private:
  friend class ReactorBuilder;
  Output(PortId id, std::uint32_t width) : id_(id), width_(width) {}
  PortId id_;
  std::uint32_t width_ = 0;
};

class Timer {
 public:
  Timer() = default;
  [[nodiscard]] TimerId id() const noexcept { return id_; }

 private:
  friend class ReactorBuilder;
  explicit Timer(TimerId id) : id_(id) {}
  TimerId id_;
};

template <class T>
class LogicalAction {
 public:
  using value_type = T;
  LogicalAction() = default;
  [[nodiscard]] ActionId id() const noexcept { return id_; }

 private:
  friend class ReactorBuilder;
  explicit LogicalAction(ActionId id) : id_(id) {}
  ActionId id_;
};

template <class T>
class PhysicalAction {
 public:
  using value_type = T;
  PhysicalAction() = default;
  [[nodiscard]] ActionId id() const noexcept { return id_; }

 private:
  friend class ReactorBuilder;
  explicit PhysicalAction(ActionId id) : id_(id) {}
  ActionId id_;
};

// -- declarations -------------------------------------------------------------

struct ReactorDecl {
  std::string name;
  std::optional<std::size_t> bank_index;
  std::vector<std::pair<std::string, std::int64_t>> parameters;
  std::vector<ReactionId> reactions;  // lexical order
};

struct PortDecl {
  ReactorId reactor;
  std::string name;
  PortDirection direction;
  std::uint32_t width;
  std::type_index type;
  ChannelId first_channel;
};

/// One independently addressable instance of a (multi)port.
struct ChannelDecl {
  PortId port;
  std::uint32_t index;
};

struct TimerDecl {
  ReactorId reactor;
  std::string name;
  Duration offset;
  std::optional<Duration> period;  // nullopt: fires once
};

struct ActionDecl {
  ReactorId reactor;
  std::string name;
  ActionKind kind;
  Duration min_delay;
  std::type_index type;
};

/// Output channel `from` feeds input channel `to`.
struct Connection {
  ChannelId from;
  ChannelId to;
  friend bool operator==(const Connection&, const Connection&) = default;
};

using TriggerRef = std::variant<PortId, ActionId, TimerId, Builtin>;
using EffectRef = std::variant<PortId, ActionId>;
using ReactionBody = std::function<void(ReactionContext&)>;

struct ReactionDecl {
  ReactorId reactor;
  std::uint32_t lexical_index;  // 1-based, declaration order within the reactor
  std::string name;
  std::vector<TriggerRef> triggers;
  std::vector<PortId> uses;  // read-only dependencies
  std::vector<EffectRef> effects;
  ReactionBody body;
};

// -- topology -------------------------------------------------------------------

/// Frozen composition of reactor instances, ports, connections and
/// reactions. Produced by Builder::build(); never modified afterwards.
class Topology {
 public:
  Topology() = default;

  [[nodiscard]] std::span<const ReactorDecl> reactors() const noexcept { return reactors_; }
  [[nodiscard]] std::span<const PortDecl> ports() const noexcept { return ports_; }
  [[nodiscard]] std::span<const ChannelDecl> channels() const noexcept { return channels_; }
  [[nodiscard]] std::span<const TimerDecl> timers() const noexcept { return timers_; }
  [[nodiscard]] std::span<const ActionDecl> actions() const noexcept { return actions_; }
  [[nodiscard]] std::span<const ReactionDecl> reactions() const noexcept { return reactions_; }
  [[nodiscard]] std::span<const Connection> connections() const noexcept { return connections_; }

  [[nodiscard]] const ReactorDecl& reactor(ReactorId id) const { return reactors_.at(id.index()); }
  [[nodiscard]] const PortDecl& port(PortId id) const { return ports_.at(id.index()); }
  [[nodiscard]] const ChannelDecl& channel(ChannelId id) const { return channels_.at(id.index()); }
  [[nodiscard]] const TimerDecl& timer(TimerId id) const { return timers_.at(id.index()); }
  [[nodiscard]] const ActionDecl& action(ActionId id) const { return actions_.at(id.index()); }
  [[nodiscard]] const ReactionDecl& reaction(ReactionId id) const { return reactions_.at(id.index()); }

  /// Channel `index` of port `port`. Throws CompositionError when out of range.
  [[nodiscard]] ChannelId channel_of(PortId port, std::uint32_t index) const;

  /// Output channel feeding input channel `input`; invalid when unconnected.
  [[nodiscard]] ChannelId upstream(ChannelId input) const { return upstream_.at(input.index()); }

  /// Input channels fed by output channel `output`.
  [[nodiscard]] std::span<const ChannelId> downstream(ChannelId output) const {
    return downstream_.at(output.index());
  }

  [[nodiscard]] std::optional<ReactorId> find_reactor(std::string_view name) const;
  [[nodiscard]] std::optional<PortId> find_port(ReactorId reactor, std::string_view name) const;

  /// "account", "wrk[2]"
  [[nodiscard]] const std::string& reactor_path(ReactorId id) const { return reactor(id).name; }
  /// "account.1"
  [[nodiscard]] std::string reaction_path(ReactionId id) const;
  /// "account.deposit"
  [[nodiscard]] std::string port_path(PortId id) const;
  /// "src.out[1]", or "wrk[0].in" for width-1 ports.
  [[nodiscard]] std::string channel_path(ChannelId id) const;
  /// "proxy.act"
  [[nodiscard]] std::string action_path(ActionId id) const;

  /// Stable digest of the structure (names, widths, declarations,
  /// connections). Independent of reaction bodies.
  [[nodiscard]] std::uint64_t structure_digest() const;

 private:
  friend class Builder;
  friend class ReactorBuilder;
  friend class ReactionBuilder;

  std::vector<ReactorDecl> reactors_;
  std::vector<PortDecl> ports_;
  std::vector<ChannelDecl> channels_;
  std::vector<TimerDecl> timers_;
  std::vector<ActionDecl> actions_;
  std::vector<ReactionDecl> reactions_;
  std::vector<Connection> connections_;
  std::vector<ChannelId> upstream_;
  std::vector<std::vector<ChannelId>> downstream_;
};

// -- builder --------------------------------------------------------------------

/// Collects the declarations of one reaction; `body()` commits it.
class ReactionBuilder {
 public:
  template <class... Refs>
  ReactionBuilder& triggered_by(const Refs&... refs) {
    (decl_.triggers.push_back(to_trigger(refs)), ...);
    return *this;
  }

  /// Ports read without being triggered by them.
  template <class... Refs>
  ReactionBuilder& uses(const Refs&... refs) {
    (decl_.uses.push_back(refs.id()), ...);
    return *this;
  }

  template <class... Refs>
  ReactionBuilder& effects(const Refs&... refs) {
    (decl_.effects.push_back(to_effect(refs)), ...);
    return *this;
  }

  /// Commits the reaction. Its lexical index is its position among the
  /// committed reactions of the owning reactor.
  ReactionId body(ReactionBody fn);

 private:
  friend class ReactorBuilder;
  ReactionBuilder(Builder* builder, ReactorId reactor, std::string name);

  template <class T>
  static TriggerRef to_trigger(const Input<T>& p) { return p.id(); }
  template <class T>
  static TriggerRef to_trigger(const LogicalAction<T>& a) { return a.id(); }
  template <class T>
  static TriggerRef to_trigger(const PhysicalAction<T>& a) { return a.id(); }
  static TriggerRef to_trigger(const Timer& t) { return t.id(); }
  static TriggerRef to_trigger(Builtin b) { return b; }

  template <class T>
  static EffectRef to_effect(const Output<T>& p) { return p.id(); }
  template <class T>
  static EffectRef to_effect(const LogicalAction<T>& a) { return a.id(); }

  Builder* builder_;
  ReactionDecl decl_;
};

/// Declares the elements of one reactor instance.
class ReactorBuilder {
 public:
  [[nodiscard]] ReactorId id() const noexcept { return id_; }
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] std::optional<std::size_t> bank_index() const;

  template <Digestible T>
  Input<T> input(std::string name, std::uint32_t width = 1) {
    return Input<T>(add_port(std::move(name), PortDirection::input, width, typeid(T)), width);
  }

  template <Digestible T>
  Output<T> output(std::string name, std::uint32_t width = 1) {
    return Output<T>(add_port(std::move(name), PortDirection::output, width, typeid(T)), width);
  }

  /// Timer firing at `offset` and then every `period`; once if no period.
  Timer timer(std::string name, Duration offset, std::optional<Duration> period = std::nullopt);

  template <Digestible T>
  LogicalAction<T> logical_action(std::string name, Duration min_delay = Duration::zero()) {
    return LogicalAction<T>(add_action(std::move(name), ActionKind::logical, min_delay, typeid(T)));
  }

  template <Digestible T>
  PhysicalAction<T> physical_action(std::string name) {
    return PhysicalAction<T>(
        add_action(std::move(name), ActionKind::physical, Duration::zero(), typeid(T)));
  }

  /// Records a named integer parameter for introspection and digests.
  void parameter(std::string name, std::int64_t value);

  ReactionBuilder reaction(std::string name = {});

 private:
  friend class Builder;
  ReactorBuilder(Builder* builder, ReactorId id) : builder_(builder), id_(id) {}

  PortId add_port(std::string name, PortDirection dir, std::uint32_t width, std::type_index type);
  ActionId add_action(std::string name, ActionKind kind, Duration min_delay, std::type_index type);
  void claim_name(const std::string& name);

  Builder* builder_;
  ReactorId id_;
};

/// Assembles a Topology. Structural errors throw CompositionError as soon
/// as they are detectable; build() runs the remaining whole-program checks.
class Builder {
 public:
  Builder() = default;
  Builder(const Builder&) = delete;
  Builder& operator=(const Builder&) = delete;
  Builder(Builder&&) = default;
  Builder& operator=(Builder&&) = default;

  ReactorBuilder reactor(std::string name);

  /// Declares `width` structurally identical reactors named "name[i]".
  /// `declare` is invoked once per member and returns that member's handles.
  template <class F>
  auto bank(const std::string& name, std::size_t width, F&& declare)
      -> std::vector<std::invoke_result_t<F&, ReactorBuilder&>> {
    if (width == 0) throw CompositionError("bank " + name + " must have width >= 1");
    std::vector<std::invoke_result_t<F&, ReactorBuilder&>> members;
    members.reserve(width);
    ReactorId first{topology_.reactors_.size()};
    for (std::size_t i = 0; i < width; ++i) {
      ReactorBuilder member = bank_member(name, i);
      members.push_back(declare(member));
    }
    check_bank_uniform(first, width);
    return members;
  }

  /// Connects two width-matched ports channel by channel.
  template <class T>
  void connect(const Output<T>& from, const Input<T>& to) {
    connect_ports(from.id(), to.id());
  }

  /// Low-level channel connection; validates direction, type and the
  /// single-writer rule.
  void connect(ChannelId from, ChannelId to);

  /// The topology under construction (used for unfolding port lists).
  [[nodiscard]] const Topology& view() const noexcept { return topology_; }

  /// Validates and freezes the topology. The builder is left empty.
  [[nodiscard]] Topology build();

 private:
  friend class ReactorBuilder;
  friend class ReactionBuilder;

  ReactorBuilder bank_member(const std::string& name, std::size_t index);
  void check_bank_uniform(ReactorId first, std::size_t width) const;
  void connect_ports(PortId from, PortId to);

  struct Elements {
    std::vector<std::string> names;
    std::vector<PortId> ports;
    std::vector<TimerId> timers;
    std::vector<ActionId> actions;
  };

  Topology topology_;
  std::vector<Elements> elements_;
  std::unordered_set<std::string> reactor_names_;
};

/// Runs a builder program and returns the frozen topology.
[[nodiscard]] Topology build_topology(const std::function<void(Builder&)>& program);

}  // namespace detreact
