#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <memory>
#include <optional>
#include <span>

#include "detreact/graph.hpp"
#include "detreact/tag.hpp"
#include "detreact/topology.hpp"
#include "detreact/trace.hpp"

namespace detreact {

class Environment;

namespace detail {
class Runtime;
}

/// Instrumentation callbacks. Reaction callbacks run on worker threads
/// concurrently; implementations must be thread-safe.
class ExecutionObserver {
 public:
  virtual ~ExecutionObserver() = default;
  virtual void on_tag_begin(const Tag& /*tag*/) {}
  /// `engaged` counts the publishing worker plus the workers woken for it.
  virtual void on_level_published(std::size_t /*level*/, std::size_t /*count*/,
                                  std::size_t /*engaged*/) {}
  virtual void on_reaction_begin(ReactionId /*reaction*/, std::size_t /*worker*/) {}
  virtual void on_reaction_end(ReactionId /*reaction*/, std::size_t /*worker*/) {}
};

struct Config {
  std::size_t workers = 1;
  /// Advance logical time without waiting for physical time.
  bool fast = false;
  /// Events later than this time value are not processed.
  std::optional<Duration> timeout;
  /// Keep running on an empty event queue until request_stop().
  bool keepalive = false;
  Trace* trace = nullptr;
  ExecutionObserver* observer = nullptr;
  /// Replaces the physical clock (elapsed time since run start) used to tag
  /// physical actions. Waiting in non-fast mode always uses the real clock.
  std::function<Duration()> clock;
};

struct TerminationReport {
  Tag last_tag;
  std::uint64_t events = 0;     // timer and action events processed
  std::uint64_t reactions = 0;  // reaction bodies executed
  std::uint64_t tags = 0;       // tags processed, including startup and shutdown
  Duration wall_time{0};
};

/// Indices and values of the present channels of a multiport, ascending.
template <class T>
class PresentRange {
 public:
  struct Entry {
    std::uint32_t index;
    const T& value;
  };

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Entry;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const PresentRange* range, std::size_t pos) : range_(range), pos_(pos) {}
    Entry operator*() const { return range_->entry(pos_); }
    iterator& operator++() {
      ++pos_;
      return *this;
    }
    iterator operator++(int) {
      auto old = *this;
      ++pos_;
      return old;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.pos_ == b.pos_; }

   private:
    const PresentRange* range_ = nullptr;
    std::size_t pos_ = 0;
  };

  PresentRange(std::span<const std::uint32_t> indices, std::span<const Value* const> sources)
      : indices_(indices), sources_(sources) {}

  [[nodiscard]] iterator begin() const { return {this, 0}; }
  [[nodiscard]] iterator end() const { return {this, indices_.size()}; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }

 private:
  Entry entry(std::size_t pos) const {
    const auto i = indices_[pos];
    return Entry{i, *sources_[i]->template get<T>()};
  }

  std::span<const std::uint32_t> indices_;
  std::span<const Value* const> sources_;
};

/// Handle passed to reaction bodies. Every access is checked against the
/// reaction's declared triggers, dependencies and effects.
class ReactionContext {
 public:
  [[nodiscard]] const Tag& tag() const noexcept;

  /// Physical time elapsed since the run started.
  [[nodiscard]] Duration physical_elapsed() const;

  template <class T>
  void set(const Output<T>& port, T value) {
    set_value(port.id(), 0, Value::of(std::move(value)));
  }

  template <class T>
  void set(const Output<T>& port, std::uint32_t channel, T value) {
    set_value(port.id(), channel, Value::of(std::move(value)));
  }

  /// Value on `port` at the current tag, or nullptr when absent.
  template <class T>
  [[nodiscard]] const T* get(const Input<T>& port, std::uint32_t channel = 0) const {
    const Value* v = input_value(port.id(), channel);
    return v == nullptr ? nullptr : v->get<T>();
  }

  template <class T>
  [[nodiscard]] bool is_present(const Input<T>& port, std::uint32_t channel = 0) const {
    return input_value(port.id(), channel) != nullptr;
  }

  /// Present channels of a multiport in ascending index order.
  template <class T>
  [[nodiscard]] PresentRange<T> present(const Input<T>& port) {
    return PresentRange<T>(present_channels(port.id()), channel_sources(port.id()));
  }

  template <class T>
  [[nodiscard]] const T* get(const LogicalAction<T>& action) const {
    const Value* v = action_value(action.id());
    return v == nullptr ? nullptr : v->get<T>();
  }

  template <class T>
  [[nodiscard]] const T* get(const PhysicalAction<T>& action) const {
    const Value* v = action_value(action.id());
    return v == nullptr ? nullptr : v->get<T>();
  }

  template <class T>
  [[nodiscard]] bool is_present(const LogicalAction<T>& action) const {
    return action_value(action.id()) != nullptr;
  }

  template <class T>
  [[nodiscard]] bool is_present(const PhysicalAction<T>& action) const {
    return action_value(action.id()) != nullptr;
  }

  [[nodiscard]] bool is_present(const Timer& timer) const;
  [[nodiscard]] bool is_present(Builtin builtin) const;

  /// Schedules `action` at min_delay + extra after the current tag.
  template <class T>
  Tag schedule(const LogicalAction<T>& action, Duration extra, T value) {
    return schedule_value(action.id(), extra, Value::of(std::move(value)));
  }

  template <class T>
  Tag schedule(const LogicalAction<T>& action, T value) {
    return schedule_value(action.id(), Duration::zero(), Value::of(std::move(value)));
  }

  void request_stop();
  [[nodiscard]] Environment& environment() noexcept;
  [[nodiscard]] std::size_t worker() const noexcept { return worker_; }
  [[nodiscard]] ReactionId reaction() const noexcept { return reaction_; }

 private:
  friend class detail::Runtime;
  ReactionContext(detail::Runtime* runtime, std::size_t worker) : rt_(runtime), worker_(worker) {}

  void set_value(PortId port, std::uint32_t channel, Value value);
  [[nodiscard]] const Value* input_value(PortId port, std::uint32_t channel) const;
  [[nodiscard]] std::span<const std::uint32_t> present_channels(PortId port);
  [[nodiscard]] std::span<const Value* const> channel_sources(PortId port) const;
  [[nodiscard]] const Value* action_value(ActionId action) const;
  Tag schedule_value(ActionId action, Duration extra, Value value);

  detail::Runtime* rt_;
  std::size_t worker_;
  ReactionId reaction_;
};

/// Owns a frozen topology and its APG and executes it.
class Environment {
 public:
  /// Throws CausalityError if the topology has a dependency cycle.
  explicit Environment(Topology topology, Config config = {});
  ~Environment();
  Environment(const Environment&) = delete;
  Environment& operator=(const Environment&) = delete;

  /// Executes the program to completion on the calling thread plus
  /// workers - 1 helper threads. May be called once. Reaction failures are
  /// rethrown as ExecutionError after all workers have stopped.
  TerminationReport run();

  /// Thread-safe. Tags the event from the physical clock, strictly after
  /// the tag being processed and after every earlier physical assignment.
  /// Throws ShutdownError after termination and std::logic_error before
  /// run() has started.
  template <class T>
  Tag schedule_physical(const PhysicalAction<T>& action, T value) {
    return schedule_physical_value(action.id(), Value::of(std::move(value)));
  }

  Tag schedule_physical_value(ActionId action, Value value);

  /// Thread-safe and idempotent. The current tag completes, then shutdown
  /// reactions run one microstep later.
  void request_stop();

  [[nodiscard]] const Topology& topology() const noexcept;
  [[nodiscard]] const Apg& apg() const noexcept;
  [[nodiscard]] const Config& config() const noexcept;

 private:
  std::unique_ptr<detail::Runtime> rt_;
};

}  // namespace detreact
