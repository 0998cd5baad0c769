#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "catalog.hpp"
#include "detreact/bench/lcg.hpp"
#include "detreact/patterns.hpp"

namespace detreact::bench::detail {

namespace {

using Int = std::int64_t;

// -- Ping Pong ---------------------------------------------------------------------

Instance ping_pong(const Params& p) {
  const Int n = param(p, "pings");
  struct State {
    Int pongs_received = 0;
    Int pings_received = 0;
  };
  auto st = std::make_shared<State>();
  Topology t = build_topology([&](Builder& b) {
    auto ping = b.reactor("ping");
    auto send = ping.output<Int>("send");
    auto recv = ping.input<Int>("receive");
    auto serve = ping.logical_action<Int>("serve");
    ping.reaction("serve").triggered_by(startup, serve).effects(send).body([=](ReactionContext& ctx) {
      ctx.set(send, ctx.is_present(serve) ? *ctx.get(serve) : Int{0});
    });
    ping.reaction("receive").triggered_by(recv).effects(serve).body([=](ReactionContext& ctx) {
      ++st->pongs_received;
      const Int next = *ctx.get(recv) + 1;
      if (next < n) ctx.schedule(serve, next);
    });

    auto pong = b.reactor("pong");
    auto in = pong.input<Int>("receive");
    auto out = pong.output<Int>("send");
    pong.reaction("reply").triggered_by(in).effects(out).body([=](ReactionContext& ctx) {
      ++st->pings_received;
      ctx.set(out, *ctx.get(in));
    });
    b.connect(send, in);
    b.connect(out, recv);
  });
  return {std::move(t), [st, n](const TerminationReport&) {
            if (auto e = check(st->pings_received == n, "pings received", st->pings_received, n)) return e;
            return check(st->pongs_received == n, "pongs received", st->pongs_received, n);
          }};
}

// -- Thread Ring ---------------------------------------------------------------------

Instance thread_ring(const Params& p) {
  const Int n = param(p, "actors", 2);
  const Int pings = param(p, "pings");
  struct State {
    std::vector<Int> hops;
    Int finisher = -1;
  };
  auto st = std::make_shared<State>();
  st->hops.assign(static_cast<std::size_t>(n), 0);
  struct Node {
    Input<Int> in;
    Output<Int> out;
  };
  Topology t = build_topology([&](Builder& b) {
    auto ring = b.bank("node", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto in = r.input<Int>("token");
      auto out = r.output<Int>("next");
      auto pass = r.logical_action<Int>("pass");
      r.reaction("pass").triggered_by(startup, pass).effects(out).body([=](ReactionContext& ctx) {
        if (ctx.is_present(pass)) {
          ctx.set(out, *ctx.get(pass));
        } else if (i == 0) {
          ctx.set(out, pings - 1);
        }
      });
      r.reaction("receive").triggered_by(in).effects(pass).body([=](ReactionContext& ctx) {
        ++st->hops[i];
        const Int remaining = *ctx.get(in);
        if (remaining > 0) {
          ctx.schedule(pass, remaining - 1);
        } else {
          st->finisher = static_cast<Int>(i);
        }
      });
      return Node{in, out};
    });
    for (std::size_t i = 0; i < ring.size(); ++i) b.connect(ring[i].out, ring[(i + 1) % ring.size()].in);
  });
  return {std::move(t), [st, n, pings](const TerminationReport&) -> std::optional<std::string> {
            for (Int j = 0; j < n; ++j) {
              // Hop k (1-based) lands on node k mod n.
              const Int expected = pings / n + (j >= 1 && j <= pings % n ? 1 : 0);
              if (auto e = check(st->hops[static_cast<std::size_t>(j)] == expected,
                                 fmt::format("hops at node {}", j), st->hops[static_cast<std::size_t>(j)],
                                 expected)) {
                return e;
              }
            }
            return check(st->finisher == pings % n, "final holder", st->finisher, pings % n);
          }};
}

// -- Counting Actor ----------------------------------------------------------------------

Instance counting_actor(const Params& p) {
  const Int n = param(p, "messages");
  struct State {
    Int count = 0;
    Int sum = 0;
  };
  auto st = std::make_shared<State>();
  Topology t = build_topology([&](Builder& b) {
    auto prod = b.reactor("producer");
    auto out = prod.output<Int>("out");
    auto next = prod.logical_action<Int>("next");
    prod.reaction("send").triggered_by(startup, next).effects(out, next).body([=](ReactionContext& ctx) {
      const Int k = ctx.is_present(next) ? *ctx.get(next) : 1;
      ctx.set(out, k);
      if (k < n) ctx.schedule(next, k + 1);
    });
    auto counter = b.reactor("counter");
    auto in = counter.input<Int>("in");
    counter.reaction("count").triggered_by(in).body([=](ReactionContext& ctx) {
      ++st->count;
      st->sum += *ctx.get(in);
    });
    b.connect(out, in);
  });
  return {std::move(t), [st, n](const TerminationReport&) {
            if (auto e = check(st->count == n, "messages counted", st->count, n)) return e;
            return check(st->sum == n * (n + 1) / 2, "sum of messages", st->sum, n * (n + 1) / 2);
          }};
}

// -- Fork Join (throughput) ----------------------------------------------------------------

Instance fork_join(const Params& p) {
  const Int n = param(p, "workers");
  const Int m = param(p, "messages");
  struct State {
    std::vector<Int> received;
    std::vector<double> checksum;
  };
  auto st = std::make_shared<State>();
  st->received.assign(static_cast<std::size_t>(n), 0);
  st->checksum.assign(static_cast<std::size_t>(n), 0.0);
  struct Worker {
    Input<Int> in;
  };
  Topology t = build_topology([&](Builder& b) {
    auto src = b.reactor("source");
    auto out = src.output<Int>("out");
    auto next = src.logical_action<Int>("next");
    src.reaction("send").triggered_by(startup, next).effects(out, next).body([=](ReactionContext& ctx) {
      const Int k = ctx.is_present(next) ? *ctx.get(next) : 0;
      ctx.set(out, k);
      if (k + 1 < m) ctx.schedule(next, k + 1);
    });
    auto workers = b.bank("worker", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto in = r.input<Int>("in");
      r.reaction("compute").triggered_by(in).body([=](ReactionContext& ctx) {
        const double theta = 37.2 + static_cast<double>(*ctx.get(in) + static_cast<Int>(i));
        const double s = std::sin(theta);
        st->checksum[i] += s * s;
        ++st->received[i];
      });
      return Worker{in};
    });
    connect(b, {ports(out)}, {ports(workers, &Worker::in)}, true);
  });
  return {std::move(t), [st, m](const TerminationReport&) -> std::optional<std::string> {
            for (std::size_t i = 0; i < st->received.size(); ++i) {
              if (auto e = check(st->received[i] == m, fmt::format("messages at worker {}", i),
                                 st->received[i], m)) {
                return e;
              }
            }
            return std::nullopt;
          }};
}

// -- Big ----------------------------------------------------------------------------------

constexpr Int kPing = 1;
constexpr Int kPong = 2;

Instance big(const Params& p) {
  const Int n = param(p, "actors", 2, 4096);
  const Int pings = param(p, "pings");
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 0));
  struct NodeState {
    explicit NodeState(std::uint64_t s) : rng(s) {}
    Lcg rng;
    std::vector<Int> outbox;
    Int sent = 0;
    Int answered = 0;
    Int pongs = 0;
    bool finished = false;
    bool reported = false;
  };
  struct State {
    std::vector<std::unique_ptr<NodeState>> nodes;
    Int sink_count = 0;
  };
  auto st = std::make_shared<State>();
  for (Int i = 0; i < n; ++i) {
    st->nodes.push_back(std::make_unique<NodeState>(stream_seed(seed, static_cast<std::uint64_t>(i))));
    st->nodes.back()->outbox.assign(static_cast<std::size_t>(n), 0);
  }
  struct Node {
    Output<Int> out;
    Input<Int> in;
    Output<Int> done;
  };
  const auto w = static_cast<std::uint32_t>(n);
  Topology t = build_topology([&](Builder& b) {
    auto nodes = b.bank("node", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      NodeState* s = st->nodes[i].get();
      auto out = r.output<Int>("out", w);
      auto in = r.input<Int>("in", w);
      auto done = r.output<Int>("done");
      auto flush = r.logical_action<Int>("flush");
      // A uniformly chosen peer other than this node.
      auto pick = [s, i, n] {
        auto j = static_cast<std::size_t>(s->rng.below(static_cast<std::uint64_t>(n - 1)));
        return j >= i ? j + 1 : j;
      };
      r.reaction("send").triggered_by(startup, flush).effects(out, done).body([=](ReactionContext& ctx) {
        if (ctx.is_present(startup)) {
          s->outbox[pick()] |= kPing;
          ++s->sent;
        }
        for (std::uint32_t j = 0; j < w; ++j) {
          if (s->outbox[j] != 0) {
            ctx.set(out, j, s->outbox[j]);
            s->outbox[j] = 0;
          }
        }
        if (s->finished && !s->reported) {
          ctx.set(done, static_cast<Int>(i));
          s->reported = true;
        }
      });
      r.reaction("receive").triggered_by(in).effects(flush).body([=](ReactionContext& ctx) {
        bool pending = false;
        for (const auto& [j, v] : ctx.present(in)) {
          if ((v & kPing) != 0) {
            s->outbox[j] |= kPong;
            ++s->answered;
            pending = true;
          }
          if ((v & kPong) != 0) {
            ++s->pongs;
            if (s->sent < pings) {
              s->outbox[pick()] |= kPing;
              ++s->sent;
            } else {
              s->finished = true;
            }
            pending = true;
          }
        }
        if (pending) ctx.schedule(flush, Int{0});
      });
      return Node{out, in, done};
    });
    connect(b, {ports(nodes, &Node::out)}, {interleaved(ports(nodes, &Node::in))});

    auto sink = b.reactor("sink");
    auto in = sink.input<Int>("done", w);
    sink.reaction("collect").triggered_by(in).body([=](ReactionContext& ctx) {
      st->sink_count += static_cast<Int>(ctx.present(in).size());
    });
    connect(b, {ports(nodes, &Node::done)}, {ports(in)});
  });
  return {std::move(t), [st, n, pings](const TerminationReport&) -> std::optional<std::string> {
            Int sent = 0;
            Int answered = 0;
            Int pongs = 0;
            for (const auto& s : st->nodes) {
              sent += s->sent;
              answered += s->answered;
              pongs += s->pongs;
            }
            if (auto e = check(sent == n * pings, "pings sent", sent, n * pings)) return e;
            if (auto e = check(answered == n * pings, "pings answered", answered, n * pings)) return e;
            if (auto e = check(pongs == n * pings, "pongs received", pongs, n * pings)) return e;
            return check(st->sink_count == n, "actors finished", st->sink_count, n);
          }};
}

// -- Chameneos ---------------------------------------------------------------------------

constexpr Int kFaded = -1;

Int complement(Int a, Int b) { return a == b ? a : 3 - a - b; }

Instance chameneos(const Params& p) {
  const Int n = param(p, "chameneos", 2, 4096);
  const Int meetings = param(p, "meetings");
  struct State {
    std::vector<Int> met;
    std::vector<char> faded;
    Int mall_meetings = 0;
  };
  auto st = std::make_shared<State>();
  st->met.assign(static_cast<std::size_t>(n), 0);
  st->faded.assign(static_cast<std::size_t>(n), 0);
  struct Creature {
    Output<Int> req;
    Input<Int> resp;
  };
  const auto w = static_cast<std::uint32_t>(n);
  Topology t = build_topology([&](Builder& b) {
    auto creatures = b.bank("chameneo", static_cast<std::size_t>(n), [&](ReactorBuilder& r) {
      const std::size_t i = *r.bank_index();
      auto color = std::make_shared<Int>(static_cast<Int>(i % 3));
      auto req = r.output<Int>("request");
      auto resp = r.input<Int>("response");
      auto again = r.logical_action<Int>("again");
      r.reaction("request").triggered_by(startup, again).effects(req).body(
          [=](ReactionContext& ctx) { ctx.set(req, *color); });
      r.reaction("meet").triggered_by(resp).effects(again).body([=](ReactionContext& ctx) {
        const Int other = *ctx.get(resp);
        if (other == kFaded) {
          st->faded[i] = 1;
          return;
        }
        ++st->met[i];
        *color = complement(*color, other);
        ctx.schedule(again, Int{0});
      });
      return Creature{req, resp};
    });

    auto mall = b.reactor("mall");
    auto in = mall.input<Int>("request", w);
    auto out = mall.output<Int>("response", w);
    struct Waiting {
      std::uint32_t index;
      Int color;
    };
    auto waiting = std::make_shared<std::optional<Waiting>>();
    mall.reaction("pair").triggered_by(in).effects(out).body([=](ReactionContext& ctx) {
      auto& wait = *waiting;
      for (const auto& [j, c] : ctx.present(in)) {
        if (st->mall_meetings == meetings) {
          ctx.set(out, j, kFaded);
        } else if (wait) {
          ctx.set(out, wait->index, c);
          ctx.set(out, j, wait->color);
          wait.reset();
          ++st->mall_meetings;
        } else {
          wait = Waiting{j, c};
        }
      }
      if (st->mall_meetings == meetings && wait) {
        ctx.set(out, wait->index, kFaded);
        wait.reset();
      }
    });
    connect(b, {ports(creatures, &Creature::req)}, {ports(in)});
    connect(b, {ports(out)}, {ports(creatures, &Creature::resp)});
  });
  return {std::move(t), [st, meetings](const TerminationReport&) -> std::optional<std::string> {
            if (auto e = check(st->mall_meetings == meetings, "meetings", st->mall_meetings, meetings)) {
              return e;
            }
            const Int total = std::accumulate(st->met.begin(), st->met.end(), Int{0});
            if (auto e = check(total == 2 * meetings, "chameneo meetings", total, 2 * meetings)) return e;
            const auto faded = static_cast<Int>(std::count(st->faded.begin(), st->faded.end(), 1));
            return check(faded == static_cast<Int>(st->faded.size()), "faded chameneos", faded,
                         static_cast<Int>(st->faded.size()));
          }};
}

}  // namespace

std::vector<BenchmarkSpec> micro_benchmarks() {
  return {
      {"PingPong", Group::micro, "two reactors exchange a message back and forth", {{"pings", 1000}},
       ping_pong},
      {"ThreadRing", Group::micro, "a token travels around a ring of reactors",
       {{"actors", 100}, {"pings", 10000}}, thread_ring},
      {"CountingActor", Group::micro, "a producer streams integers to a summing counter",
       {{"messages", 20000}}, counting_actor},
      {"ForkJoin", Group::micro, "one source broadcasts to a bank of compute workers",
       {{"workers", 60}, {"messages", 1000}}, fork_join},
      {"Big", Group::micro, "all-to-all ping/pong between randomly chosen peers",
       {{"actors", 32}, {"pings", 500}, {"seed", 42}}, big},
      {"Chameneos", Group::micro, "creatures meet pairwise at a mall and change color",
       {{"chameneos", 10}, {"meetings", 2000}}, chameneos},
  };
}

}  // namespace detreact::bench::detail
