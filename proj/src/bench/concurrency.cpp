#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "catalog.hpp"
#include "detreact/bench/lcg.hpp"
#include "detreact/patterns.hpp"

namespace detreact::bench::detail {

namespace {

using Int = std::int64_t;
using Pair = std::pair<Int, Int>;
using namespace std::chrono_literals;

std::uint32_t width_of(Int n) { return static_cast<std::uint32_t>(n); }

// -- Concurrent Dictionary ---------------------------------------------------------------

struct DictOp {
  Int key;
  Int value;  // -1 for a read
};

DictOp draw_op(Lcg& rng, Int keys, Int write_percent) {
  const auto key = static_cast<Int>(rng.below(static_cast<std::uint64_t>(keys)));
  const bool write = static_cast<Int>(rng.below(100)) < write_percent;
  const auto value = static_cast<Int>(rng.below(1U << 20));
  return {key, write ? value : -1};
}

Instance concurrent_dictionary(const Params& p) {
  const Int n = param(p, "workers", 1, 4096);
  const Int messages = param(p, "messages");
  const Int keys = param(p, "keys");
  const Int write_percent = param(p, "write_percent", 0, 100);
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 0));
  struct WorkerState {
    explicit WorkerState(std::uint64_t s) : rng(s) {}
    Lcg rng;
    Int sent = 0;
    Int replies = 0;
    Int reply_sum = 0;
  };
  struct State {
    std::vector<std::unique_ptr<WorkerState>> workers;
    std::unordered_map<Int, Int> dict;
  };
  auto st = std::make_shared<State>();
  for (Int i = 0; i < n; ++i) {
    st->workers.push_back(std::make_unique<WorkerState>(stream_seed(seed, static_cast<std::uint64_t>(i))));
  }
  struct Worker {
    Output<Pair> req;
    Input<Int> resp;
  };
  Topology t = build_topology([&](Builder& b) {
    auto workers = b.bank("worker", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      WorkerState* s = st->workers[*r.bank_index()].get();
      auto req = r.output<Pair>("request");
      auto resp = r.input<Int>("response");
      auto next = r.logical_action<Int>("next");
      r.reaction("request").triggered_by(startup, next).effects(req).body([=](ReactionContext& ctx) {
        const DictOp op = draw_op(s->rng, keys, write_percent);
        ctx.set(req, Pair{op.key, op.value});
        ++s->sent;
      });
      r.reaction("response").triggered_by(resp).effects(next).body([=](ReactionContext& ctx) {
        ++s->replies;
        s->reply_sum += *ctx.get(resp);
        if (s->sent < messages) ctx.schedule(next, Int{0});
      });
      return Worker{req, resp};
    });
    auto dict = b.reactor("dictionary");
    auto in = dict.input<Pair>("request", width_of(n));
    auto out = dict.output<Int>("response", width_of(n));
    dict.reaction("serve").triggered_by(in).effects(out).body([=](ReactionContext& ctx) {
      for (const auto& [j, op] : ctx.present(in)) {
        if (op.second >= 0) {
          st->dict[op.first] = op.second;
          ctx.set(out, j, op.second);
        } else {
          const auto it = st->dict.find(op.first);
          ctx.set(out, j, it == st->dict.end() ? Int{-1} : it->second);
        }
      }
    });
    connect(b, {ports(workers, &Worker::req)}, {ports(in)});
    connect(b, {ports(out)}, {ports(workers, &Worker::resp)});
  });
  auto validate = [st, n, messages, keys, write_percent, seed](
                      const TerminationReport&) -> std::optional<std::string> {
    // Sequential replay: round k applies every worker's k-th request in index order.
    std::vector<Lcg> rngs;
    for (Int i = 0; i < n; ++i) rngs.emplace_back(stream_seed(seed, static_cast<std::uint64_t>(i)));
    std::map<Int, Int> dict;
    std::vector<Int> sums(static_cast<std::size_t>(n), 0);
    for (Int k = 0; k < messages; ++k) {
      for (std::size_t i = 0; i < rngs.size(); ++i) {
        const DictOp op = draw_op(rngs[i], keys, write_percent);
        if (op.value >= 0) {
          dict[op.key] = op.value;
          sums[i] += op.value;
        } else {
          const auto it = dict.find(op.key);
          sums[i] += it == dict.end() ? -1 : it->second;
        }
      }
    }
    for (std::size_t i = 0; i < sums.size(); ++i) {
      const auto& w = *st->workers[i];
      if (auto e = check(w.replies == messages, fmt::format("replies at worker {}", i), w.replies, messages)) {
        return e;
      }
      if (auto e = check(w.reply_sum == sums[i], fmt::format("reply sum at worker {}", i), w.reply_sum,
                         sums[i])) {
        return e;
      }
    }
    const std::map<Int, Int> got(st->dict.begin(), st->dict.end());
    if (got != dict) return std::string("dictionary contents differ from sequential replay");
    return std::nullopt;
  };
  return {std::move(t), validate};
}

// -- Sleeping Barber -----------------------------------------------------------------------

Instance sleeping_barber(const Params& p) {
  const Int customers = param(p, "customers");
  const Int capacity = param(p, "waiting_room");
  const Int arrival_us = param(p, "arrival_us");
  const Int haircut_us = param(p, "haircut_us");
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 0));
  struct State {
    std::vector<Int> served;
    Int haircuts = 0;
    Int rejections = 0;
    std::size_t max_waiting = 0;
  };
  auto st = std::make_shared<State>();
  st->served.assign(static_cast<std::size_t>(customers), 0);
  auto delay = [](Lcg& rng, Int mean_us) {
    return std::chrono::microseconds(1 + static_cast<Int>(rng.below(static_cast<std::uint64_t>(2 * mean_us))));
  };
  Topology t = build_topology([&](Builder& b) {
    // Customers enter at scheduled times; rejected ones come back later.
    auto factory = b.reactor("factory");
    auto enter = factory.output<std::vector<Int>>("enter");
    auto rejected = factory.input<std::vector<Int>>("rejected");
    auto wake = factory.logical_action<Int>("wake");
    struct FactoryState {
      explicit FactoryState(std::uint64_t s) : rng(s) {}
      Lcg rng;
      std::map<Tag, std::vector<Int>> due;
    };
    auto fs = std::make_shared<FactoryState>(stream_seed(seed, 0));
    factory.reaction("arrive").triggered_by(startup, wake).effects(enter, wake).body([=](ReactionContext& ctx) {
      if (ctx.is_present(startup)) {
        Duration at{0};
        for (Int c = 0; c < customers; ++c) {
          at += delay(fs->rng, arrival_us);
          fs->due[ctx.schedule(wake, at, Int{0})].push_back(c);
        }
        return;
      }
      const auto it = fs->due.find(ctx.tag());
      if (it == fs->due.end()) return;
      ctx.set(enter, std::move(it->second));
      fs->due.erase(it);
    });
    factory.reaction("rejected").triggered_by(rejected).effects(wake).body([=](ReactionContext& ctx) {
      for (Int c : *ctx.get(rejected)) {
        fs->due[ctx.schedule(wake, delay(fs->rng, haircut_us), Int{0})].push_back(c);
        ++st->rejections;
      }
    });

    auto room = b.reactor("room");
    auto arrivals = room.input<std::vector<Int>>("arrivals");
    auto ready = room.input<Int>("barber_ready");
    auto to_barber = room.output<Int>("next");
    auto reject = room.output<std::vector<Int>>("reject");
    struct RoomState {
      std::deque<Int> waiting;
      bool busy = false;
    };
    auto rs = std::make_shared<RoomState>();
    room.reaction("enter").triggered_by(arrivals).effects(to_barber, reject).body([=](ReactionContext& ctx) {
      std::vector<Int> turned_away;
      for (Int c : *ctx.get(arrivals)) {
        if (!rs->busy) {
          rs->busy = true;
          ctx.set(to_barber, c);
        } else if (static_cast<Int>(rs->waiting.size()) < capacity) {
          rs->waiting.push_back(c);
        } else {
          turned_away.push_back(c);
        }
      }
      st->max_waiting = std::max(st->max_waiting, rs->waiting.size());
      if (!turned_away.empty()) ctx.set(reject, std::move(turned_away));
    });
    room.reaction("next").triggered_by(ready).effects(to_barber).body([=](ReactionContext& ctx) {
      rs->busy = false;
      if (rs->waiting.empty()) return;
      rs->busy = true;
      ctx.set(to_barber, rs->waiting.front());
      rs->waiting.pop_front();
    });

    auto barber = b.reactor("barber");
    auto in = barber.input<Int>("customer");
    auto done_out = barber.output<Int>("ready");
    auto done = barber.logical_action<Int>("done");
    auto brng = std::make_shared<Lcg>(stream_seed(seed, 1));
    barber.reaction("finish").triggered_by(done).effects(done_out).body([=](ReactionContext& ctx) {
      const Int c = *ctx.get(done);
      ++st->served[static_cast<std::size_t>(c)];
      ++st->haircuts;
      ctx.set(done_out, c);
    });
    barber.reaction("cut").triggered_by(in).effects(done).body(
        [=](ReactionContext& ctx) { ctx.schedule(done, delay(*brng, haircut_us), *ctx.get(in)); });

    b.connect(enter, arrivals);
    b.connect(reject, rejected);
    b.connect(to_barber, in);
    b.connect(done_out, ready);
  });
  return {std::move(t), [st, customers, capacity](const TerminationReport&) -> std::optional<std::string> {
            if (auto e = check(st->haircuts == customers, "haircuts", st->haircuts, customers)) return e;
            for (std::size_t c = 0; c < st->served.size(); ++c) {
              if (auto e = check(st->served[c] == 1, fmt::format("haircuts of customer {}", c), st->served[c], 1)) {
                return e;
              }
            }
            const auto max_waiting = static_cast<Int>(st->max_waiting);
            return check(max_waiting <= capacity, "waiting room occupancy", max_waiting, capacity);
          }};
}

// -- Cigarette Smokers ---------------------------------------------------------------------

Instance cigarette_smokers(const Params& p) {
  const Int rounds = param(p, "rounds");
  const Int n = param(p, "smokers", 1, 4096);
  const Int smoke_us = param(p, "smoke_us");
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 0));
  struct State {
    std::vector<Int> smoked;
    Int offered = 0;
  };
  auto st = std::make_shared<State>();
  st->smoked.assign(static_cast<std::size_t>(n), 0);
  struct Smoker {
    Input<Int> offer;
    Output<Int> done;
  };
  Topology t = build_topology([&](Builder& b) {
    auto smokers = b.bank("smoker", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto offer = r.input<Int>("offer");
      auto done = r.output<Int>("done");
      auto finished = r.logical_action<Int>("finished");
      auto rng = std::make_shared<Lcg>(stream_seed(seed, i + 1));
      r.reaction("finish").triggered_by(finished).effects(done).body(
          [=](ReactionContext& ctx) { ctx.set(done, *ctx.get(finished)); });
      r.reaction("smoke").triggered_by(offer).effects(finished).body([=](ReactionContext& ctx) {
        ++st->smoked[i];
        const auto d = std::chrono::microseconds(1 + static_cast<Int>(rng->below(static_cast<std::uint64_t>(smoke_us))));
        ctx.schedule(finished, d, *ctx.get(offer));
      });
      return Smoker{offer, done};
    });
    auto arbiter = b.reactor("arbiter");
    auto out = arbiter.output<Int>("offer", width_of(n));
    auto in = arbiter.input<Int>("done", width_of(n));
    auto rng = std::make_shared<Lcg>(stream_seed(seed, 0));
    arbiter.reaction("offer").triggered_by(startup, in).effects(out).body([=](ReactionContext& ctx) {
      if (st->offered == rounds) return;
      // The smoker holding the missing ingredient gets to smoke.
      const auto who = static_cast<std::uint32_t>(rng->below(static_cast<std::uint64_t>(n)));
      ctx.set(out, who, st->offered++);
    });
    connect(b, {ports(out)}, {ports(smokers, &Smoker::offer)});
    connect(b, {ports(smokers, &Smoker::done)}, {ports(in)});
  });
  return {std::move(t), [st, rounds, n, seed](const TerminationReport&) -> std::optional<std::string> {
            Lcg rng(stream_seed(seed, 0));
            std::vector<Int> expected(static_cast<std::size_t>(n), 0);
            for (Int r = 0; r < rounds; ++r) ++expected[rng.below(static_cast<std::uint64_t>(n))];
            for (std::size_t i = 0; i < expected.size(); ++i) {
              if (auto e = check(st->smoked[i] == expected[i], fmt::format("rounds smoked by {}", i),
                                 st->smoked[i], expected[i])) {
                return e;
              }
            }
            return std::nullopt;
          }};
}

// -- Dining Philosophers --------------------------------------------------------------------

constexpr Int kHungry = 1;
constexpr Int kDone = 2;
constexpr Int kDenied = 0;
constexpr Int kEat = 1;

Instance dining_philosophers(const Params& p) {
  const Int n = param(p, "philosophers", 2, 4096);
  const Int rounds = param(p, "rounds");
  struct State {
    std::vector<Int> eats;
    std::vector<Int> denials;
    std::vector<char> forks;  // 1 while held
    std::vector<Int> grants;  // per philosopher, arbitrator-owned
    Int granted = 0;
  };
  auto st = std::make_shared<State>();
  st->eats.assign(static_cast<std::size_t>(n), 0);
  st->denials.assign(static_cast<std::size_t>(n), 0);
  st->forks.assign(static_cast<std::size_t>(n), 0);
  st->grants.assign(static_cast<std::size_t>(n), 0);
  struct Philosopher {
    Output<Int> req;
    Input<Int> reply;
  };
  Topology t = build_topology([&](Builder& b) {
    auto phils = b.bank("philosopher", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto req = r.output<Int>("request");
      auto reply = r.input<Int>("reply");
      auto act = r.logical_action<Int>("act");
      r.reaction("ask").triggered_by(startup, act).effects(req).body([=](ReactionContext& ctx) {
        ctx.set(req, ctx.is_present(act) ? *ctx.get(act) : kHungry);
      });
      r.reaction("answer").triggered_by(reply).effects(act).body([=](ReactionContext& ctx) {
        if (*ctx.get(reply) == kEat) {
          ++st->eats[i];
          ctx.schedule(act, st->eats[i] < rounds ? kDone | kHungry : kDone);
        } else {
          ++st->denials[i];
          ctx.schedule(act, kHungry);
        }
      });
      return Philosopher{req, reply};
    });
    auto arb = b.reactor("arbitrator");
    auto in = arb.input<Int>("request", width_of(n));
    auto out = arb.output<Int>("reply", width_of(n));
    arb.reaction("arbitrate").triggered_by(in).effects(out).body([=](ReactionContext& ctx) {
      auto& forks = st->forks;
      const auto right = [n](std::size_t i) { return (i + 1) % static_cast<std::size_t>(n); };
      std::vector<std::size_t> hungry;
      for (const auto& [i, v] : ctx.present(in)) {
        if ((v & kDone) != 0) {
          forks[i] = 0;
          forks[right(i)] = 0;
        }
        if ((v & kHungry) != 0) hungry.push_back(i);
      }
      // Philosophers who have eaten least go first.
      std::stable_sort(hungry.begin(), hungry.end(),
                       [&](std::size_t a, std::size_t b) { return st->grants[a] < st->grants[b]; });
      for (std::size_t i : hungry) {
        if (forks[i] == 0 && forks[right(i)] == 0) {
          forks[i] = 1;
          forks[right(i)] = 1;
          ++st->granted;
          ++st->grants[i];
          ctx.set(out, static_cast<std::uint32_t>(i), kEat);
        } else {
          ctx.set(out, static_cast<std::uint32_t>(i), kDenied);
        }
      }
    });
    connect(b, {ports(phils, &Philosopher::req)}, {ports(in)});
    connect(b, {ports(out)}, {ports(phils, &Philosopher::reply)});
  });
  return {std::move(t), [st, n, rounds](const TerminationReport&) -> std::optional<std::string> {
            for (std::size_t i = 0; i < st->eats.size(); ++i) {
              if (auto e = check(st->eats[i] == rounds, fmt::format("meals of philosopher {}", i), st->eats[i],
                                 rounds)) {
                return e;
              }
            }
            if (auto e = check(st->granted == n * rounds, "meals granted", st->granted, n * rounds)) return e;
            const auto held = static_cast<Int>(std::count(st->forks.begin(), st->forks.end(), 1));
            return check(held == 0, "forks held at termination", held, 0);
          }};
}

// -- Bank Transaction -----------------------------------------------------------------------

constexpr Int kInitialBalance = 1'000'000;

struct Transfer {
  std::size_t from;
  std::size_t to;
  Int amount;
};

Instance bank_transaction(const Params& p) {
  const Int n = param(p, "accounts", 1, 4096);
  const Int count = param(p, "transactions");
  const Int batch = param(p, "batch");
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 0));
  auto transfers = std::make_shared<std::vector<Transfer>>();
  {
    Lcg rng(seed);
    for (Int k = 0; k < count; ++k) {
      const auto from = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
      const auto to = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
      transfers->push_back({from, to, 1 + static_cast<Int>(rng.below(1000))});
    }
  }
  struct State {
    std::vector<Int> balance;
    Int acks = 0;
    Int audited_tags = 0;
    Int conservation_failures = 0;
  };
  auto st = std::make_shared<State>();
  st->balance.assign(static_cast<std::size_t>(n), kInitialBalance);
  struct Account {
    Input<Pair> debit;
    Output<Int> credit_out;
    Input<Int> credit_in;
    Output<Int> ack;
  };
  const auto w = width_of(n);
  Topology t = build_topology([&](Builder& b) {
    auto teller = b.reactor("teller");
    auto tx = teller.output<Pair>("transfer", w);
    auto acks = teller.input<Int>("ack", w);
    auto next = teller.logical_action<Int>("next");
    auto cursor = std::make_shared<std::size_t>(0);
    teller.reaction("issue").triggered_by(startup, next).effects(tx, next).body([=](ReactionContext& ctx) {
      // Issue transfers in order until a source account repeats within the tag.
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      Int issued = 0;
      while (*cursor < transfers->size() && issued < batch) {
        const Transfer& tr = (*transfers)[*cursor];
        if (used[tr.from] != 0) break;
        used[tr.from] = 1;
        ctx.set(tx, static_cast<std::uint32_t>(tr.from), Pair{static_cast<Int>(tr.to), tr.amount});
        ++*cursor;
        ++issued;
      }
      if (*cursor < transfers->size()) ctx.schedule(next, Int{0});
    });
    auto accounts = b.bank("account", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto debit = r.input<Pair>("debit");
      auto credit_out = r.output<Int>("credit_out", w);
      auto credit_in = r.input<Int>("credit_in", w);
      auto ack = r.output<Int>("ack");
      r.reaction("debit").triggered_by(debit).effects(credit_out).body([=](ReactionContext& ctx) {
        const auto [to, amount] = *ctx.get(debit);
        st->balance[i] -= amount;
        ctx.set(credit_out, static_cast<std::uint32_t>(to), amount);
      });
      r.reaction("credit").triggered_by(credit_in).effects(ack).body([=](ReactionContext& ctx) {
        Int received = 0;
        for (const auto& [j, amount] : ctx.present(credit_in)) {
          st->balance[i] += amount;
          ++received;
        }
        ctx.set(ack, received);
      });
      return Account{debit, credit_out, credit_in, ack};
    });
    // Runs after every account reaction of the tag, so balances are settled.
    teller.reaction("audit").triggered_by(acks).body([=](ReactionContext& ctx) {
      for (const auto& [j, k] : ctx.present(acks)) st->acks += k;
      const Int total = std::accumulate(st->balance.begin(), st->balance.end(), Int{0});
      ++st->audited_tags;
      if (total != kInitialBalance * n) ++st->conservation_failures;
    });
    connect(b, {ports(tx)}, {ports(accounts, &Account::debit)});
    connect(b, {ports(accounts, &Account::credit_out)}, {interleaved(ports(accounts, &Account::credit_in))});
    connect(b, {ports(accounts, &Account::ack)}, {ports(acks)});
  });
  return {std::move(t), [st, transfers, n, count](const TerminationReport&) -> std::optional<std::string> {
            if (auto e = check(st->acks == count, "acknowledged transfers", st->acks, count)) return e;
            if (auto e = check(st->conservation_failures == 0, "tags violating conservation",
                               st->conservation_failures, 0)) {
              return e;
            }
            std::vector<Int> expected(static_cast<std::size_t>(n), kInitialBalance);
            for (const auto& tr : *transfers) {
              expected[tr.from] -= tr.amount;
              expected[tr.to] += tr.amount;
            }
            for (std::size_t i = 0; i < expected.size(); ++i) {
              if (auto e = check(st->balance[i] == expected[i], fmt::format("balance of account {}", i),
                                 st->balance[i], expected[i])) {
                return e;
              }
            }
            return std::nullopt;
          }};
}

// -- Producer Consumer ---------------------------------------------------------------------

double busy_work(Int iterations, double x) {
  for (Int k = 0; k < iterations; ++k) x = x * 1.000001 + 0.5 / (1.0 + x);
  return x;
}

Instance producer_consumer(const Params& p) {
  const Int producers = param(p, "producers", 1, 4096);
  const Int consumers = param(p, "consumers", 1, 4096);
  const Int items = param(p, "items");
  const Int capacity = param(p, "buffer");
  const Int produce_cost = param(p, "produce_cost", 0);
  const Int consume_cost = param(p, "consume_cost", 0);
  struct State {
    std::vector<Int> produced;
    std::vector<Int> consumed;
    std::vector<Int> consumed_sum;
    std::vector<double> work;
  };
  auto st = std::make_shared<State>();
  st->produced.assign(static_cast<std::size_t>(producers), 0);
  st->consumed.assign(static_cast<std::size_t>(consumers), 0);
  st->consumed_sum.assign(static_cast<std::size_t>(consumers), 0);
  st->work.assign(static_cast<std::size_t>(producers + consumers), 0.0);
  struct Producer {
    Output<Int> data;
    Input<Int> more;
  };
  struct Consumer {
    Output<Int> ready;
    Input<Int> work;
  };
  Topology t = build_topology([&](Builder& b) {
    auto prods = b.bank("producer", static_cast<std::size_t>(producers), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto data = r.output<Int>("data");
      auto more = r.input<Int>("more");
      auto go = r.logical_action<Int>("go");
      r.reaction("produce").triggered_by(startup, go).effects(data).body([=](ReactionContext& ctx) {
        if (st->produced[i] == items) return;
        st->work[i] = busy_work(produce_cost, st->work[i]);
        ctx.set(data, static_cast<Int>(i) * items + st->produced[i]++);
      });
      r.reaction("more").triggered_by(more).effects(go).body(
          [=](ReactionContext& ctx) { ctx.schedule(go, Int{0}); });
      return Producer{data, more};
    });
    auto cons = b.bank("consumer", static_cast<std::size_t>(consumers), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto ready = r.output<Int>("ready");
      auto work = r.input<Int>("work");
      auto idle = r.logical_action<Int>("idle");
      r.reaction("ready").triggered_by(startup, idle).effects(ready).body(
          [=](ReactionContext& ctx) { ctx.set(ready, Int{1}); });
      r.reaction("consume").triggered_by(work).effects(idle).body([=](ReactionContext& ctx) {
        const std::size_t slot = static_cast<std::size_t>(producers) + i;
        st->work[slot] = busy_work(consume_cost, st->work[slot]);
        ++st->consumed[i];
        st->consumed_sum[i] += *ctx.get(work);
        ctx.schedule(idle, Int{0});
      });
      return Consumer{ready, work};
    });
    auto mgr = b.reactor("manager");
    auto data_in = mgr.input<Int>("data", width_of(producers));
    auto ready_in = mgr.input<Int>("ready", width_of(consumers));
    auto more_out = mgr.output<Int>("more", width_of(producers));
    auto work_out = mgr.output<Int>("work", width_of(consumers));
    struct Buffer {
      std::deque<Int> items;
      std::deque<std::uint32_t> idle;
      std::deque<std::uint32_t> blocked;
    };
    auto buf = std::make_shared<Buffer>();
    mgr.reaction("manage").triggered_by(data_in, ready_in).effects(more_out, work_out).body([=](ReactionContext& ctx) {
      for (const auto& [c, v] : ctx.present(ready_in)) buf->idle.push_back(c);
      for (const auto& [j, item] : ctx.present(data_in)) {
        buf->items.push_back(item);
        buf->blocked.push_back(j);
      }
      while (!buf->idle.empty() && !buf->items.empty()) {
        ctx.set(work_out, buf->idle.front(), buf->items.front());
        buf->idle.pop_front();
        buf->items.pop_front();
      }
      while (!buf->blocked.empty() && static_cast<Int>(buf->items.size()) < capacity) {
        ctx.set(more_out, buf->blocked.front(), Int{1});
        buf->blocked.pop_front();
      }
    });
    connect(b, {ports(prods, &Producer::data)}, {ports(data_in)});
    connect(b, {ports(more_out)}, {ports(prods, &Producer::more)});
    connect(b, {ports(cons, &Consumer::ready)}, {ports(ready_in)});
    connect(b, {ports(work_out)}, {ports(cons, &Consumer::work)});
  });
  return {std::move(t), [st, producers, items](const TerminationReport&) -> std::optional<std::string> {
            const Int total = producers * items;
            const Int consumed = std::accumulate(st->consumed.begin(), st->consumed.end(), Int{0});
            if (auto e = check(consumed == total, "items consumed", consumed, total)) return e;
            const Int sum = std::accumulate(st->consumed_sum.begin(), st->consumed_sum.end(), Int{0});
            return check(sum == total * (total - 1) / 2, "sum of consumed items", sum, total * (total - 1) / 2);
          }};
}

}  // namespace

std::vector<BenchmarkSpec> concurrency_benchmarks() {
  return {
      {"ConcurrentDictionary", Group::concurrency, "workers read and write a shared dictionary",
       {{"workers", 20}, {"messages", 1000}, {"keys", 400}, {"write_percent", 10}, {"seed", 42}},
       concurrent_dictionary},
      {"SleepingBarber", Group::concurrency, "customers queue in a bounded waiting room for one barber",
       {{"customers", 500}, {"waiting_room", 20}, {"arrival_us", 100}, {"haircut_us", 110}, {"seed", 42}},
       sleeping_barber},
      {"CigaretteSmokers", Group::concurrency, "an arbiter hands ingredients to one smoker at a time",
       {{"rounds", 1000}, {"smokers", 20}, {"smoke_us", 100}, {"seed", 42}}, cigarette_smokers},
      {"DiningPhilosophers", Group::concurrency, "philosophers acquire two forks through an arbitrator",
       {{"philosophers", 20}, {"rounds", 200}}, dining_philosophers},
      {"BankTransaction", Group::concurrency, "a teller moves money between accounts",
       {{"accounts", 100}, {"transactions", 5000}, {"batch", 10}, {"seed", 42}}, bank_transaction},
      {"ProducerConsumer", Group::concurrency, "producers and consumers share a bounded buffer",
       {{"producers", 20},
        {"consumers", 20},
        {"items", 100},
        {"buffer", 50},
        {"produce_cost", 200},
        {"consume_cost", 200}},
       producer_consumer},
  };
}

}  // namespace detreact::bench::detail
