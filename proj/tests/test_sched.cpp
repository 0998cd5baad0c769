#include <gtest/gtest.h>

#include <atomic>
#include <barrier>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "detreact/environment.hpp"
#include "detreact/event_queue.hpp"
#include "detreact/ready_queue.hpp"
#include "support/programs.hpp"

using namespace detreact;
using namespace std::chrono_literals;

// -- ready queue ---------------------------------------------------------------------

TEST(ReadyQueue, ThreeConcurrentPopsTakeEachIndexOnce) {
  for (int round = 0; round < 200; ++round) {
    ReadyQueue q(3);
    const std::vector<ReactionId> items = {ReactionId{std::size_t{10}}, ReactionId{std::size_t{11}},
                                           ReactionId{std::size_t{12}}};
    q.fill(items);
    std::vector<std::optional<ReactionId>> got(3);
    std::barrier sync(3);
    std::vector<std::thread> threads;
    for (int t = 0; t < 3; ++t) {
      threads.emplace_back([&, t] {
        sync.arrive_and_wait();
        got[static_cast<std::size_t>(t)] = q.pop();
      });
    }
    for (auto& t : threads) t.join();
    std::set<std::uint32_t> ids;
    for (const auto& g : got) {
      ASSERT_TRUE(g.has_value());
      ids.insert(g->value);
    }
    EXPECT_EQ(ids, (std::set<std::uint32_t>{10, 11, 12}));
    EXPECT_FALSE(q.pop().has_value());
  }
}

TEST(ReadyQueue, SequentialPopsCountDown) {
  ReadyQueue q(3);
  const std::vector<ReactionId> items = {ReactionId{std::size_t{0}}, ReactionId{std::size_t{1}},
                                         ReactionId{std::size_t{2}}};
  q.fill(items);
  EXPECT_EQ(q.pop()->value, 2u);
  EXPECT_EQ(q.pop()->value, 1u);
  EXPECT_EQ(q.pop()->value, 0u);
  EXPECT_FALSE(q.pop());
}

TEST(ReadyQueue, EmptyPop) {
  ReadyQueue q(4);
  EXPECT_FALSE(q.pop().has_value());
  EXPECT_EQ(q.available(), 0u);
}

TEST(ReadyQueue, EightWorkersFiveItems) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 300; ++round) {
    ReadyQueue q(5);
    std::vector<ReactionId> items;
    for (std::size_t i = 0; i < 5; ++i) items.push_back(ReactionId{i});
    q.fill(items);
    std::atomic<int> hits{0};
    std::atomic<int> empties{0};
    std::vector<std::atomic<int>> taken(5);
    std::vector<int> delay(8);
    for (auto& d : delay) d = std::uniform_int_distribution<int>(0, 3)(rng);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] {
        for (int y = 0; y < delay[static_cast<std::size_t>(t)]; ++y) std::this_thread::yield();
        if (auto r = q.pop()) {
          ++hits;
          ++taken[r->index()];
        } else {
          ++empties;
        }
      });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(hits, 5);
    EXPECT_EQ(empties, 3);
    for (auto& c : taken) EXPECT_EQ(c, 1);
  }
}

// -- event queue --------------------------------------------------------------------------

TEST(EventQueue, ReplacesSameKeyAtSameTag) {
  EventQueue q;
  const TriggerKey k{TriggerKind::action, 3};
  q.push(Tag{1s, 0}, k, Value::of(1));
  q.push(Tag{1s, 0}, k, Value::of(2));
  q.push(Tag{1s, 0}, TriggerKey{TriggerKind::action, 4}, Value::of(9));
  q.push(Tag{0s, 2}, k, Value::of(5));
  EXPECT_EQ(q.size(), 3u);
  const auto* at = q.at(Tag{1s, 0});
  ASSERT_NE(at, nullptr);
  ASSERT_EQ(at->size(), 2u);
  EXPECT_EQ(*(*at)[0].value.get<int>(), 2);
  auto [tag, first] = q.pop();
  EXPECT_EQ(tag, (Tag{0s, 2}));
  EXPECT_EQ(first.size(), 1u);
  EXPECT_EQ(q.next_tag(), (Tag{1s, 0}));
}

// -- execution invariants -----------------------------------------------------------------

namespace {

/// Checks the scheduling invariants while reactions run and optionally
/// sleeps inside reactions to perturb interleavings.
class InvariantObserver : public ExecutionObserver {
 public:
  InvariantObserver(const Environment* env, std::size_t workers, int max_sleep_us, std::uint64_t seed)
      : env_(env), workers_(workers), max_sleep_us_(max_sleep_us), rng_(seed) {}

  void on_tag_begin(const Tag& tag) override {
    std::lock_guard lk(mu_);
    if (!running_.empty()) violations_.push_back("tag began with reactions running");
    if (tag <= last_tag_ && tags_ > 0) violations_.push_back("tags not increasing");
    last_tag_ = tag;
    level_floor_ = 0;
    ++tags_;
  }

  void on_level_published(std::size_t level, std::size_t count, std::size_t engaged) override {
    std::lock_guard lk(mu_);
    if (!running_.empty()) violations_.push_back("level published with reactions running");
    if (level < level_floor_) violations_.push_back("levels published out of order");
    level_floor_ = level + 1;
    if (engaged != std::min(count, workers_)) violations_.push_back("wrong engaged count");
    if (count == 0) violations_.push_back("empty level published");
    published_ += count;
    publishes_.emplace_back(count, engaged);
  }

  void on_reaction_begin(ReactionId r, std::size_t worker) override {
    int sleep_us = 0;
    {
      std::lock_guard lk(mu_);
      const auto& apg = env_->apg();
      const auto& topo = env_->topology();
      for (ReactionId q : running_) {
        if (apg.level(q) != apg.level(r)) violations_.push_back("different levels overlap");
        if (apg.reaches(q, r) || apg.reaches(r, q)) violations_.push_back("dependent reactions overlap");
        if (topo.reaction(q).reactor == topo.reaction(r).reactor) {
          violations_.push_back("same reactor overlaps");
        }
      }
      running_.push_back(r);
      max_running_ = std::max(max_running_, running_.size());
      if (worker >= workers_) violations_.push_back("worker index out of range");
      if (max_sleep_us_ > 0) sleep_us = std::uniform_int_distribution<int>(0, max_sleep_us_)(rng_);
      ++begun_;
    }
    if (sleep_us > 0) std::this_thread::sleep_for(std::chrono::microseconds(sleep_us));
  }

  void on_reaction_end(ReactionId r, std::size_t) override {
    std::lock_guard lk(mu_);
    running_.erase(std::find(running_.begin(), running_.end(), r));
  }

  std::vector<std::string> violations_;
  std::size_t max_running_ = 0;
  std::size_t begun_ = 0;
  std::size_t published_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> publishes_;

 private:
  const Environment* env_;
  std::size_t workers_;
  int max_sleep_us_;
  std::mt19937_64 rng_;
  std::mutex mu_;
  std::vector<ReactionId> running_;
  Tag last_tag_;
  std::size_t tags_ = 0;
  std::size_t level_floor_ = 0;
};

struct Checked {
  TerminationReport report;
  std::vector<std::string> violations;
  std::size_t max_running = 0;
  std::size_t begun = 0;
  std::size_t published = 0;
  std::vector<std::pair<std::size_t, std::size_t>> publishes;
};

Checked run_checked(Topology t, std::size_t workers, int max_sleep_us) {
  Config c;
  c.workers = workers;
  c.fast = true;
  std::unique_ptr<InvariantObserver> obs;
  Environment* envp = nullptr;
  // The observer needs the environment for APG lookups; construct in two steps.
  struct Holder : ExecutionObserver {
    InvariantObserver* inner = nullptr;
    void on_tag_begin(const Tag& g) override { inner->on_tag_begin(g); }
    void on_level_published(std::size_t l, std::size_t n, std::size_t e) override {
      inner->on_level_published(l, n, e);
    }
    void on_reaction_begin(ReactionId r, std::size_t w) override { inner->on_reaction_begin(r, w); }
    void on_reaction_end(ReactionId r, std::size_t w) override { inner->on_reaction_end(r, w); }
  } holder;
  c.observer = &holder;
  Environment env(std::move(t), c);
  envp = &env;
  obs = std::make_unique<InvariantObserver>(envp, workers, max_sleep_us, 17);
  holder.inner = obs.get();
  Checked out;
  out.report = env.run();
  out.violations = obs->violations_;
  out.max_running = obs->max_running_;
  out.begun = obs->begun_;
  out.published = obs->published_;
  out.publishes = obs->publishes_;
  return out;
}

}  // namespace

TEST(Scheduler, InvariantsHoldUnderJitter) {
  for (std::size_t w : {1u, 2u, 4u, 8u}) {
    auto collected = std::make_shared<fixtures::Collected>();
    const auto r = run_checked(fixtures::bank_multiports(5, true, 8, collected), w, 300);
    EXPECT_TRUE(r.violations.empty()) << "workers=" << w << ": " << r.violations.front();
    EXPECT_LE(r.max_running, w);
    EXPECT_EQ(r.begun, r.report.reactions);
    EXPECT_EQ(r.published, r.report.reactions);  // no lost or duplicated work
    EXPECT_EQ(r.report.reactions, 8u * 5u * 2u);
  }
}

TEST(Scheduler, ForkJoinInvariants) {
  for (std::size_t w : {1u, 3u, 8u}) {
    const auto r = run_checked(fixtures::fork_join(12, 5, nullptr), w, 200);
    EXPECT_TRUE(r.violations.empty()) << r.violations.front();
    // Per round: src, 12 workers, dst.
    EXPECT_EQ(r.report.reactions, 5u * 14u);
    bool wide = false;
    for (const auto& [count, engaged] : r.publishes) {
      if (count == 12) {
        wide = true;
        EXPECT_EQ(engaged, std::min<std::size_t>(12, w));
      }
    }
    EXPECT_TRUE(wide);
  }
}

TEST(Scheduler, SimultaneousProxyAndDepositLevel) {
  // userA sends every second; proxy forwards with a one second delay. From
  // t=1s on, proxy.2 (new input) and account.1 (delayed value) share level 1.
  auto balance = std::make_shared<double>(0.0);
  const Topology t = build_topology([&](Builder& b) {
    auto ua = b.reactor("userA");
    auto ta = ua.timer("t", 0s, 1s);
    auto oa = ua.output<double>("out");
    ua.reaction().triggered_by(ta).effects(oa).body([oa](ReactionContext& ctx) { ctx.set(oa, 5.0); });
    auto p = b.reactor("proxy");
    auto pin = p.input<double>("in");
    auto pout = p.output<double>("out");
    auto act = p.logical_action<double>("act", 1s);
    p.reaction().triggered_by(act).effects(pout).body(
        [act, pout](ReactionContext& ctx) { ctx.set(pout, *ctx.get(act)); });
    p.reaction().triggered_by(pin).effects(act).body(
        [pin, act](ReactionContext& ctx) { ctx.schedule(act, *ctx.get(pin)); });
    auto acc = b.reactor("account");
    auto ain = acc.input<double>("a");
    acc.reaction().triggered_by(ain).body(
        [ain, balance](ReactionContext& ctx) { *balance += *ctx.get(ain); });
    b.connect(oa, pin);
    b.connect(pout, ain);
  });
  struct Recorder : ExecutionObserver {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> published;
    void on_level_published(std::size_t l, std::size_t n, std::size_t e) override {
      published.emplace_back(l, n, e);
    }
  } rec;
  Config c;
  c.workers = 2;
  c.fast = true;
  c.timeout = 1s;
  c.observer = &rec;
  Environment env(t, c);
  (void)env.run();
  // t=0: level 0 {userA.1}, level 1 {proxy.2}; t=1s: level 0 {userA.1, proxy.1},
  // level 1 {proxy.2, account.1}.
  const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> expected = {
      {0, 1, 1}, {1, 1, 1}, {0, 2, 2}, {1, 2, 2}};
  EXPECT_EQ(rec.published, expected);
  EXPECT_EQ(*balance, 5.0);
}

TEST(Scheduler, ManyReactionsFewWorkers) {
  const auto r = run_checked(fixtures::fork_join(40, 3, nullptr), 2, 0);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.report.reactions, 3u * 42u);
}

// -- time advance ----------------------------------------------------------------------------

TEST(TimeAdvance, FastModeDoesNotSleep) {
  Config c;
  c.fast = true;
  int fired = 0;
  Environment env(build_topology([&](Builder& b) {
                    auto a = b.reactor("a");
                    auto t1 = a.timer("t1", 1s);
                    auto t2 = a.timer("t2", 2s);
                    a.reaction().triggered_by(t1, t2).body([&](ReactionContext&) { ++fired; });
                  }),
                  c);
  const auto report = env.run();
  EXPECT_EQ(fired, 2);
  EXPECT_LT(report.wall_time, 200ms);
}

TEST(TimeAdvance, ChasesPhysicalTime) {
  Duration observed{0};
  Environment env(build_topology([&](Builder& b) {
                    auto a = b.reactor("a");
                    auto t = a.timer("t", 60ms);
                    a.reaction().triggered_by(t).body(
                        [&](ReactionContext& ctx) { observed = ctx.physical_elapsed(); });
                  }),
                  Config{});
  (void)env.run();
  EXPECT_GE(observed, 60ms);
}

TEST(TimeAdvance, PhysicalEventInterruptsWait) {
  PhysicalAction<int> act;
  std::vector<std::string> order;
  std::atomic<bool> started{false};
  Environment env(build_topology([&](Builder& b) {
                    auto a = b.reactor("a");
                    act = a.physical_action<int>("ext");
                    auto t = a.timer("t", 600ms);
                    a.reaction().triggered_by(startup).body([&](ReactionContext&) { started = true; });
                    a.reaction().triggered_by(act).body([&](ReactionContext& ctx) {
                      order.push_back("physical@" + std::to_string(ctx.tag().time.count()));
                    });
                    a.reaction().triggered_by(t).body([&](ReactionContext&) { order.push_back("timer"); });
                  }),
                  Config{});
  Tag assigned;
  std::thread ext([&] {
    while (!started) std::this_thread::yield();
    std::this_thread::sleep_for(50ms);
    assigned = env.schedule_physical(act, 1);
  });
  (void)env.run();
  ext.join();
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0], "physical@" + std::to_string(assigned.time.count()));
  EXPECT_EQ(order[1], "timer");
  EXPECT_LT(assigned.time, 600ms);
}
