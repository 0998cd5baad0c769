#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <semaphore>
#include <thread>

#include "detreact/environment.hpp"
#include "detreact/event_queue.hpp"
#include "detreact/ready_queue.hpp"
#include "detreact/reaction_queue.hpp"

namespace detreact::detail {

namespace {

struct OutputSlot {
  Value value;
  bool present = false;
};

/// Set channels of one input port at the current tag. Writers append
/// concurrently; the owning reactor's reactions read it at later levels.
struct Presence {
  std::unique_ptr<std::uint32_t[]> indices;
  std::atomic<std::uint32_t> count{0};
  bool sorted = false;
};

struct PendingSchedule {
  ReactionId reaction;
  std::uint64_t seq;
  ActionId action;
  Tag tag;
  Value value;
};

struct RawTrace {
  ReactionId reaction;
  std::vector<std::pair<ChannelId, std::uint64_t>> effects;
  std::vector<std::pair<ActionId, Tag>> scheduled;
};

struct alignas(64) WorkerState {
  std::vector<ChannelId> touched_outputs;
  std::vector<PortId> touched_inputs;
  std::vector<PendingSchedule> schedules;
  std::vector<RawTrace> trace;
  std::uint64_t seq = 0;
  std::uint64_t executed = 0;
};

struct Access {
  std::vector<PortId> writes;
  std::vector<PortId> reads;
  std::vector<ActionId> schedules;
  std::vector<ActionId> action_triggers;
  std::vector<TimerId> timers;
  bool startup = false;
  bool shutdown = false;
};

template <class T>
bool has(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

enum class State { idle, running, terminated };

}  // namespace

class Runtime {
 public:
  Runtime(Environment* env, Topology topology, Config config);

  TerminationReport run();
  Tag schedule_physical(ActionId action, Value value);
  void request_stop();

  Environment* env_;
  Topology topo_;
  Apg apg_;
  Config config_;

  // Static lookup tables.
  std::vector<Access> access_;
  std::vector<std::vector<ReactionId>> triggered_by_port_;
  std::vector<std::vector<ReactionId>> triggered_by_action_;
  std::vector<std::vector<ReactionId>> triggered_by_timer_;
  std::vector<ReactionId> startup_reactions_;
  std::vector<ReactionId> shutdown_reactions_;
  std::vector<const OutputSlot*> source_slot_;  // per input channel
  std::vector<const Value*> source_value_;      // per input channel
  std::vector<std::uint32_t> rank_;             // canonical trace order
  std::vector<std::string> channel_label_;

  // Per-tag state.
  std::vector<OutputSlot> slots_;
  std::unique_ptr<Presence[]> presence_;
  std::vector<Value> action_value_;
  std::vector<char> action_present_;
  std::vector<char> timer_present_;
  std::vector<TriggerKey> current_events_;
  bool startup_present_ = false;
  bool shutdown_present_ = false;
  Tag current_tag_;

  // Scheduling.
  ReactionQueue rq_;
  ReadyQueue ready_;
  std::vector<ReactionId> batch_;
  std::counting_semaphore<> permits_{0};
  std::atomic<std::size_t> remaining_{0};
  std::atomic<bool> done_{false};
  std::size_t next_level_ = 0;
  bool in_tag_ = false;
  bool processed_any_ = false;

  // Shared with external threads, guarded by mu_.
  std::mutex mu_;
  std::condition_variable cv_;
  EventQueue events_;
  State state_ = State::idle;
  bool stop_requested_ = false;
  bool terminating_ = false;
  Tag last_physical_;
  TimePoint start_;

  std::mutex failure_mu_;
  std::exception_ptr failure_;
  std::atomic<bool> failed_{false};

  std::vector<WorkerState> workers_;
  std::vector<ReactionContext> contexts_;
  std::uint64_t event_count_ = 0;
  std::uint64_t tag_count_ = 0;

  [[nodiscard]] Duration real_elapsed() const {
    return std::chrono::duration_cast<Duration>(PhysicalClock::now() - start_);
  }

  void worker_main(std::size_t w, bool initial);
  bool drain(std::size_t w);
  bool step();
  bool guarded_step();
  void finish();
  void publish(std::size_t level);
  bool begin_next_tag();
  void seed(const std::vector<Event>& events, std::unique_lock<std::mutex>& lk);
  void end_tag();
  void flush_trace();
  void execute(ReactionId r, std::size_t w);
  void record_failure(ReactionId r, const std::string& what, std::exception_ptr cause);

  [[noreturn]] void violation(const ReactionContext& ctx, const std::string& what) const {
    throw ContractViolation("reaction " + topo_.reaction_path(ctx.reaction_) + " " + what);
  }
};

Runtime::Runtime(Environment* env, Topology topology, Config config)
    : env_(env),
      topo_(std::move(topology)),
      apg_(build_apg_or_throw(topo_)),
      config_(std::move(config)),
      rq_(apg_),
      ready_(std::max<std::size_t>(max_level_width(apg_), 1)) {
  if (config_.workers == 0) throw std::invalid_argument("worker count must be at least 1");
  const auto reactions = topo_.reactions();
  access_.resize(reactions.size());
  triggered_by_port_.resize(topo_.ports().size());
  triggered_by_action_.resize(topo_.actions().size());
  triggered_by_timer_.resize(topo_.timers().size());
  for (std::size_t i = 0; i < reactions.size(); ++i) {
    ReactionId id{i};
    auto& a = access_[i];
    for (const auto& t : reactions[i].triggers) {
      if (const auto* p = std::get_if<PortId>(&t)) {
        a.reads.push_back(*p);
        triggered_by_port_[p->index()].push_back(id);
      } else if (const auto* ac = std::get_if<ActionId>(&t)) {
        a.action_triggers.push_back(*ac);
        triggered_by_action_[ac->index()].push_back(id);
      } else if (const auto* tm = std::get_if<TimerId>(&t)) {
        a.timers.push_back(*tm);
        triggered_by_timer_[tm->index()].push_back(id);
      } else if (std::get<Builtin>(t) == Builtin::startup) {
        a.startup = true;
        startup_reactions_.push_back(id);
      } else {
        a.shutdown = true;
        shutdown_reactions_.push_back(id);
      }
    }
    for (PortId p : reactions[i].uses) a.reads.push_back(p);
    for (const auto& e : reactions[i].effects) {
      if (const auto* p = std::get_if<PortId>(&e)) {
        a.writes.push_back(*p);
      } else {
        a.schedules.push_back(std::get<ActionId>(e));
      }
    }
  }
  for (auto* lists : {&triggered_by_port_, &triggered_by_action_, &triggered_by_timer_}) {
    for (auto& v : *lists) v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  const std::size_t channels = topo_.channels().size();
  slots_.resize(channels);
  source_slot_.assign(channels, nullptr);
  source_value_.assign(channels, nullptr);
  for (std::size_t c = 0; c < channels; ++c) {
    const ChannelId up = topo_.upstream(ChannelId{c});
    if (up.valid()) {
      source_slot_[c] = &slots_[up.index()];
      source_value_[c] = &slots_[up.index()].value;
    }
  }
  presence_ = std::make_unique<Presence[]>(topo_.ports().size());
  for (std::size_t p = 0; p < topo_.ports().size(); ++p) {
    const auto& decl = topo_.ports()[p];
    if (decl.direction == PortDirection::input) {
      presence_[p].indices = std::make_unique<std::uint32_t[]>(decl.width);
    }
  }
  action_value_.resize(topo_.actions().size());
  action_present_.assign(topo_.actions().size(), 0);
  timer_present_.assign(topo_.timers().size(), 0);

  std::vector<ReactionId> order(reactions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = ReactionId{i};
  std::sort(order.begin(), order.end(), [&](ReactionId a, ReactionId b) {
    const auto& ra = topo_.reaction(a);
    const auto& rb = topo_.reaction(b);
    const auto la = apg_.level(a);
    const auto lb = apg_.level(b);
    if (la != lb) return la < lb;
    const auto& pa = topo_.reactor_path(ra.reactor);
    const auto& pb = topo_.reactor_path(rb.reactor);
    if (pa != pb) return pa < pb;
    return ra.lexical_index < rb.lexical_index;
  });
  rank_.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank_[order[i].index()] = static_cast<std::uint32_t>(i);

  if (config_.trace != nullptr) {
    channel_label_.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      const auto& ch = topo_.channels()[c];
      const auto& port = topo_.port(ch.port);
      channel_label_[c] = port.width == 1 ? port.name
                                          : port.name + "[" + std::to_string(ch.index) + "]";
    }
  }

  workers_.resize(config_.workers);
  contexts_.reserve(config_.workers);
  for (std::size_t w = 0; w < config_.workers; ++w) contexts_.push_back(ReactionContext(this, w));
}

// -- execution ------------------------------------------------------------------

TerminationReport Runtime::run() {
  {
    std::lock_guard lk(mu_);
    if (state_ != State::idle) throw std::logic_error("an environment can only be run once");
    start_ = PhysicalClock::now();
    if (topo_.reactions().empty()) {
      state_ = State::terminated;
      return TerminationReport{};
    }
    state_ = State::running;
    if (!startup_reactions_.empty()) events_.push(Tag{}, TriggerKey{TriggerKind::startup, 0}, {});
    for (std::size_t t = 0; t < topo_.timers().size(); ++t) {
      events_.push(Tag{topo_.timers()[t].offset, 0},
                   TriggerKey{TriggerKind::timer, static_cast<std::uint32_t>(t)}, {});
    }
  }

  const auto t0 = PhysicalClock::now();
  std::vector<std::thread> threads;
  threads.reserve(config_.workers - 1);
  for (std::size_t w = 1; w < config_.workers; ++w) {
    threads.emplace_back([this, w] { worker_main(w, false); });
  }
  worker_main(0, true);
  for (auto& t : threads) t.join();
  const auto wall = std::chrono::duration_cast<Duration>(PhysicalClock::now() - t0);

  {
    std::lock_guard lk(mu_);
    state_ = State::terminated;
    events_.clear();
  }
  if (failure_) std::rethrow_exception(failure_);

  TerminationReport report;
  report.last_tag = current_tag_;
  report.events = event_count_;
  report.tags = tag_count_;
  report.wall_time = wall;
  for (const auto& ws : workers_) report.reactions += ws.executed;
  return report;
}

void Runtime::worker_main(std::size_t w, bool initial) {
  if (initial) {
    if (!guarded_step()) {
      finish();
      return;
    }
    if (drain(w)) return;
  }
  for (;;) {
    permits_.acquire();
    if (done_.load(std::memory_order_acquire)) return;
    if (drain(w)) return;
  }
}

/// Executes ready reactions until the queue is empty. Returns true when
/// this thread terminated the run.
bool Runtime::drain(std::size_t w) {
  for (;;) {
    const auto r = ready_.pop();
    if (!r) return false;
    execute(*r, w);
    if (remaining_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
      // Last reaction of the level: this worker becomes the scheduler.
      if (!guarded_step()) {
        finish();
        return true;
      }
    }
  }
}

void Runtime::finish() {
  done_.store(true, std::memory_order_release);
  if (config_.workers > 1) permits_.release(static_cast<std::ptrdiff_t>(config_.workers - 1));
}

bool Runtime::guarded_step() {
  try {
    return step();
  } catch (...) {
    std::lock_guard lk(failure_mu_);
    if (!failure_) failure_ = std::current_exception();
    failed_.store(true);
    return false;
  }
}

/// Publishes the next non-empty level, advancing tags as needed. Returns
/// false when execution is over.
bool Runtime::step() {
  for (;;) {
    if (failed_.load(std::memory_order_acquire)) return false;
    if (in_tag_) {
      for (std::size_t l = next_level_; l < rq_.levels(); ++l) {
        if (rq_.size(l) > 0) {
          next_level_ = l + 1;
          publish(l);
          return true;
        }
      }
      end_tag();
      in_tag_ = false;
      if (terminating_) return false;
    }
    if (!begin_next_tag()) return false;
    in_tag_ = true;
    next_level_ = 0;
  }
}

void Runtime::publish(std::size_t level) {
  rq_.take(level, batch_);
  const std::size_t n = batch_.size();
  const std::size_t engaged = std::min(n, config_.workers);
  const std::size_t woken = engaged - 1;
  if (config_.observer != nullptr) config_.observer->on_level_published(level, n, engaged);
  remaining_.store(n, std::memory_order_relaxed);
  ready_.fill(batch_);
  if (woken > 0) permits_.release(static_cast<std::ptrdiff_t>(woken));
}

bool Runtime::begin_next_tag() {
  std::unique_lock lk(mu_);
  for (;;) {
    if (!terminating_) {
      bool stop = stop_requested_;
      if (!stop && events_.empty()) {
        if (config_.keepalive) {
          if (config_.timeout && !config_.fast) {
            const auto now = real_elapsed();
            if (now < *config_.timeout) {
              cv_.wait_for(lk, *config_.timeout - now);
              continue;
            }
            stop = true;
          } else if (config_.timeout) {
            stop = true;
          } else {
            cv_.wait(lk);
            continue;
          }
        } else {
          stop = true;
        }
      }
      if (!stop && config_.timeout && events_.next_tag()->time > *config_.timeout) stop = true;
      if (stop) {
        terminating_ = true;
        current_tag_ = processed_any_ ? current_tag_.next_microstep() : Tag{};
        std::vector<Event> at_stop;
        if (events_.next_tag() == current_tag_) at_stop = events_.pop().second;
        events_.clear();
        seed(at_stop, lk);
        return true;
      }
      const Tag next = *events_.next_tag();
      if (!config_.fast) {
        const auto now = real_elapsed();
        if (now < next.time) {
          // Wakes early on request_stop() or an earlier physical event.
          cv_.wait_for(lk, next.time - now);
          continue;
        }
      }
      auto [tag, events] = events_.pop();
      current_tag_ = tag;
      seed(events, lk);
      return true;
    }
    return false;
  }
}

/// Marks the triggers of the new current tag present and stages their
/// reactions. Called with mu_ held.
void Runtime::seed(const std::vector<Event>& events, std::unique_lock<std::mutex>& lk) {
  processed_any_ = true;
  ++tag_count_;
  current_events_.clear();
  for (const auto& e : events) {
    current_events_.push_back(e.key);
    switch (e.key.kind) {
      case TriggerKind::startup:
        startup_present_ = true;
        for (ReactionId r : startup_reactions_) rq_.push(r);
        break;
      case TriggerKind::shutdown:
        break;
      case TriggerKind::timer: {
        ++event_count_;
        timer_present_[e.key.index] = 1;
        for (ReactionId r : triggered_by_timer_[e.key.index]) rq_.push(r);
        const auto& decl = topo_.timers()[e.key.index];
        if (decl.period && !terminating_) {
          if (auto t = checked_add(current_tag_.time, *decl.period)) events_.push(Tag{*t, 0}, e.key, {});
        }
        break;
      }
      case TriggerKind::action:
        ++event_count_;
        action_value_[e.key.index] = e.value;
        action_present_[e.key.index] = 1;
        for (ReactionId r : triggered_by_action_[e.key.index]) rq_.push(r);
        break;
    }
  }
  if (terminating_) {
    shutdown_present_ = true;
    for (ReactionId r : shutdown_reactions_) rq_.push(r);
  }
  lk.unlock();
  if (config_.observer != nullptr) config_.observer->on_tag_begin(current_tag_);
  lk.lock();
}

void Runtime::end_tag() {
  if (config_.trace != nullptr) flush_trace();

  std::vector<PendingSchedule> pending;
  for (auto& ws : workers_) {
    std::move(ws.schedules.begin(), ws.schedules.end(), std::back_inserter(pending));
    ws.schedules.clear();
  }
  if (!pending.empty() && !terminating_) {
    std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
      return a.reaction != b.reaction ? a.reaction < b.reaction : a.seq < b.seq;
    });
    std::lock_guard lk(mu_);
    for (auto& p : pending) {
      events_.push(p.tag, TriggerKey{TriggerKind::action, p.action.value}, std::move(p.value));
    }
  }

  for (auto& ws : workers_) {
    for (ChannelId c : ws.touched_outputs) {
      slots_[c.index()].present = false;
      slots_[c.index()].value.reset();
    }
    ws.touched_outputs.clear();
    for (PortId p : ws.touched_inputs) {
      presence_[p.index()].count.store(0, std::memory_order_relaxed);
      presence_[p.index()].sorted = false;
    }
    ws.touched_inputs.clear();
  }
  for (const auto& key : current_events_) {
    if (key.kind == TriggerKind::action) {
      action_present_[key.index] = 0;
      action_value_[key.index].reset();
    } else if (key.kind == TriggerKind::timer) {
      timer_present_[key.index] = 0;
    }
  }
  current_events_.clear();
  startup_present_ = false;
  shutdown_present_ = false;
}

void Runtime::flush_trace() {
  std::vector<RawTrace> raw;
  for (auto& ws : workers_) {
    std::move(ws.trace.begin(), ws.trace.end(), std::back_inserter(raw));
    ws.trace.clear();
  }
  std::sort(raw.begin(), raw.end(), [&](const RawTrace& a, const RawTrace& b) {
    return rank_[a.reaction.index()] < rank_[b.reaction.index()];
  });
  for (const auto& r : raw) {
    const auto& decl = topo_.reaction(r.reaction);
    TraceRecord rec;
    rec.tag = current_tag_;
    rec.reactor = topo_.reactor_path(decl.reactor);
    rec.index = decl.lexical_index;
    rec.effects.reserve(r.effects.size());
    for (const auto& [c, d] : r.effects) rec.effects.emplace_back(channel_label_[c.index()], d);
    for (const auto& [a, t] : r.scheduled) rec.scheduled.emplace_back(topo_.action(a).name, t);
    config_.trace->append(rec);
  }
}

void Runtime::execute(ReactionId r, std::size_t w) {
  auto& ctx = contexts_[w];
  ctx.reaction_ = r;
  if (config_.observer != nullptr) config_.observer->on_reaction_begin(r, w);
  if (config_.trace != nullptr) workers_[w].trace.push_back(RawTrace{r, {}, {}});
  try {
    topo_.reaction(r).body(ctx);
  } catch (const std::exception& e) {
    record_failure(r, e.what(), std::current_exception());
  } catch (...) {
    record_failure(r, "unknown exception", std::current_exception());
  }
  if (config_.observer != nullptr) config_.observer->on_reaction_end(r, w);
  ++workers_[w].executed;
}

void Runtime::record_failure(ReactionId r, const std::string& what, std::exception_ptr cause) {
  std::lock_guard lk(failure_mu_);
  if (!failure_) {
    failure_ = std::make_exception_ptr(ExecutionError(topo_.reaction_path(r), what, cause));
  }
  failed_.store(true, std::memory_order_release);
}

// -- external scheduling ---------------------------------------------------------

Tag Runtime::schedule_physical(ActionId action, Value value) {
  if (!action.valid() || action.index() >= topo_.actions().size() ||
      topo_.action(action).kind != ActionKind::physical) {
    throw ContractViolation("schedule_physical requires a physical action");
  }
  std::lock_guard lk(mu_);
  if (state_ == State::idle) throw std::logic_error("environment is not running");
  if (state_ == State::terminated || terminating_) {
    throw ShutdownError("environment has shut down; cannot schedule " + topo_.action_path(action));
  }
  const Duration now = config_.clock ? config_.clock() : real_elapsed();
  Duration t = std::max(now, current_tag_.time + Duration{1});
  if (last_physical_.time >= t) t = last_physical_.time + Duration{1};
  const Tag tag{t, 0};
  last_physical_ = tag;
  events_.push(tag, TriggerKey{TriggerKind::action, action.value}, std::move(value));
  cv_.notify_all();
  return tag;
}

void Runtime::request_stop() {
  std::lock_guard lk(mu_);
  stop_requested_ = true;
  cv_.notify_all();
}

}  // namespace detreact::detail

namespace detreact {

// -- ReactionContext ------------------------------------------------------------------

const Tag& ReactionContext::tag() const noexcept { return rt_->current_tag_; }

Duration ReactionContext::physical_elapsed() const { return rt_->real_elapsed(); }

void ReactionContext::set_value(PortId port, std::uint32_t channel, Value value) {
  auto& rt = *rt_;
  const auto& access = rt.access_[reaction_.index()];
  if (!detail::has(access.writes, port)) {
    rt.violation(*this, "sets undeclared effect " + rt.topo_.port_path(port));
  }
  const auto& decl = rt.topo_.port(port);
  if (channel >= decl.width) {
    rt.violation(*this, "sets channel " + std::to_string(channel) + " of " +
                            rt.topo_.port_path(port) + " (width " + std::to_string(decl.width) + ")");
  }
  const ChannelId c{decl.first_channel.value + channel};
  auto& ws = rt.workers_[worker_];
  auto& slot = rt.slots_[c.index()];
  slot.value = std::move(value);
  if (rt.config_.trace != nullptr) ws.trace.back().effects.emplace_back(c, slot.value.digest());
  if (slot.present) return;
  slot.present = true;
  ws.touched_outputs.push_back(c);
  for (ChannelId d : rt.topo_.downstream(c)) {
    const auto& target = rt.topo_.channel(d);
    auto& pr = rt.presence_[target.port.index()];
    const auto k = pr.count.fetch_add(1, std::memory_order_relaxed);
    pr.indices[k] = target.index;
    if (k == 0) ws.touched_inputs.push_back(target.port);
    for (ReactionId r : rt.triggered_by_port_[target.port.index()]) rt.rq_.push(r);
  }
}

const Value* ReactionContext::input_value(PortId port, std::uint32_t channel) const {
  const auto& rt = *rt_;
  if (!detail::has(rt.access_[reaction_.index()].reads, port)) {
    rt.violation(*this, "reads undeclared input " + rt.topo_.port_path(port));
  }
  const auto& decl = rt.topo_.port(port);
  if (channel >= decl.width) {
    rt.violation(*this, "reads channel " + std::to_string(channel) + " of " +
                            rt.topo_.port_path(port) + " (width " + std::to_string(decl.width) + ")");
  }
  const auto* slot = rt.source_slot_[decl.first_channel.index() + channel];
  return slot != nullptr && slot->present ? &slot->value : nullptr;
}

std::span<const std::uint32_t> ReactionContext::present_channels(PortId port) {
  auto& rt = *rt_;
  if (!detail::has(rt.access_[reaction_.index()].reads, port)) {
    rt.violation(*this, "reads undeclared input " + rt.topo_.port_path(port));
  }
  auto& pr = rt.presence_[port.index()];
  const auto n = pr.count.load(std::memory_order_relaxed);
  if (n > 1 && !pr.sorted) {
    std::sort(pr.indices.get(), pr.indices.get() + n);
    pr.sorted = true;
  }
  return {pr.indices.get(), n};
}

std::span<const Value* const> ReactionContext::channel_sources(PortId port) const {
  const auto& decl = rt_->topo_.port(port);
  return {rt_->source_value_.data() + decl.first_channel.index(), decl.width};
}

const Value* ReactionContext::action_value(ActionId action) const {
  const auto& rt = *rt_;
  if (!detail::has(rt.access_[reaction_.index()].action_triggers, action)) {
    rt.violation(*this, "reads action " + rt.topo_.action_path(action) + " it is not triggered by");
  }
  return rt.action_present_[action.index()] != 0 ? &rt.action_value_[action.index()] : nullptr;
}

Tag ReactionContext::schedule_value(ActionId action, Duration extra, Value value) {
  auto& rt = *rt_;
  if (!detail::has(rt.access_[reaction_.index()].schedules, action)) {
    rt.violation(*this, "schedules undeclared action " + rt.topo_.action_path(action));
  }
  const auto& decl = rt.topo_.action(action);
  if (decl.kind != ActionKind::logical) {
    rt.violation(*this, "schedules physical action " + rt.topo_.action_path(action) +
                            " from a reaction");
  }
  if (extra < Duration::zero()) rt.violation(*this, "schedules with a negative delay");
  const auto delay = checked_add(decl.min_delay, extra);
  if (!delay) throw std::overflow_error("logical delay overflows");
  const Tag tag = rt.current_tag_.delayed(*delay);
  auto& ws = rt.workers_[worker_];
  ws.schedules.push_back(detail::PendingSchedule{reaction_, ws.seq++, action, tag, std::move(value)});
  if (rt.config_.trace != nullptr) ws.trace.back().scheduled.emplace_back(action, tag);
  return tag;
}

bool ReactionContext::is_present(const Timer& timer) const {
  const auto& rt = *rt_;
  if (!detail::has(rt.access_[reaction_.index()].timers, timer.id())) {
    rt.violation(*this, "reads timer " + rt.topo_.timer(timer.id()).name + " it is not triggered by");
  }
  return rt.timer_present_[timer.id().index()] != 0;
}

bool ReactionContext::is_present(Builtin builtin) const {
  const auto& rt = *rt_;
  const auto& access = rt.access_[reaction_.index()];
  if (builtin == Builtin::startup) {
    if (!access.startup) rt.violation(*this, "reads startup without declaring it");
    return rt.startup_present_;
  }
  if (!access.shutdown) rt.violation(*this, "reads shutdown without declaring it");
  return rt.shutdown_present_;
}

void ReactionContext::request_stop() { rt_->request_stop(); }

Environment& ReactionContext::environment() noexcept { return *rt_->env_; }

// -- Environment ----------------------------------------------------------------------

Environment::Environment(Topology topology, Config config)
    : rt_(std::make_unique<detail::Runtime>(this, std::move(topology), std::move(config))) {}

Environment::~Environment() = default;

TerminationReport Environment::run() { return rt_->run(); }

Tag Environment::schedule_physical_value(ActionId action, Value value) {
  return rt_->schedule_physical(action, std::move(value));
}

void Environment::request_stop() { rt_->request_stop(); }

const Topology& Environment::topology() const noexcept { return rt_->topo_; }
const Apg& Environment::apg() const noexcept { return rt_->apg_; }
const Config& Environment::config() const noexcept { return rt_->config_; }

}  // namespace detreact
