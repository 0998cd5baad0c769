#include "programs.hpp"

#include <fmt/format.h>

namespace detreact::fixtures {

using namespace std::chrono_literals;

namespace {

struct User {
  Output<double> out;
};

User user(Builder& b, const std::string& name, Duration offset, double amount) {
  auto r = b.reactor(name);
  auto t = r.timer("t", offset);
  auto out = r.output<double>("out");
  r.reaction("send").triggered_by(t).effects(out).body(
      [out, amount](ReactionContext& ctx) { ctx.set(out, amount); });
  return User{out};
}

struct Account {
  Input<double> a;
  Input<double> b;
};

Account account(Builder& b, std::shared_ptr<Ledger> ledger) {
  auto r = b.reactor("account");
  auto in_a = r.input<double>("a");
  auto in_b = r.input<double>("b");
  auto apply = [ledger](ReactionContext& ctx, double change) {
    const bool granted = ledger->balance + change >= 0.0;
    if (granted) ledger->balance += change;
    ledger->log.push_back(fmt::format("t={} {} {:+g} {}", ctx.tag().time.count(),
                                      change >= 0 ? "deposit" : "withdrawal", change,
                                      granted ? "granted" : "denied"));
  };
  r.reaction("on_a").triggered_by(in_a).body([in_a, apply](ReactionContext& ctx) {
    apply(ctx, *ctx.get(in_a));
  });
  r.reaction("on_b").triggered_by(in_b).body([in_b, apply](ReactionContext& ctx) {
    apply(ctx, *ctx.get(in_b));
  });
  return Account{in_a, in_b};
}

}  // namespace

Topology bank_direct(std::shared_ptr<Ledger> ledger, double deposit, double withdrawal) {
  return build_topology([&](Builder& b) {
    auto a = user(b, "userA", 1s, deposit);
    auto u = user(b, "userB", 2s, withdrawal);
    auto acc = account(b, ledger);
    b.connect(a.out, acc.a);
    b.connect(u.out, acc.b);
  });
}

Topology bank_proxy(std::shared_ptr<Ledger> ledger, Duration delay, double deposit,
                    double withdrawal) {
  return build_topology([&](Builder& b) {
    auto a = user(b, "userA", 1s, deposit);
    auto u = user(b, "userB", 2s, withdrawal);

    auto p = b.reactor("proxy");
    auto in = p.input<double>("in");
    auto out = p.output<double>("out");
    auto act = p.logical_action<double>("act", delay);
    p.reaction("forward").triggered_by(act).effects(out).body(
        [act, out](ReactionContext& ctx) { ctx.set(out, *ctx.get(act)); });
    p.reaction("delay").triggered_by(in).effects(act).body(
        [in, act](ReactionContext& ctx) { ctx.schedule(act, *ctx.get(in)); });

    auto acc = account(b, ledger);
    b.connect(a.out, in);
    b.connect(out, acc.a);
    b.connect(u.out, acc.b);
  });
}

namespace {

struct Worker {
  Input<std::int64_t> in;
  Output<std::int64_t> out;
};

/// Worker reactor: out = in * in + bank_index.
Worker worker(ReactorBuilder& r) {
  auto in = r.input<std::int64_t>("in");
  auto out = r.output<std::int64_t>("out");
  const auto k = static_cast<std::int64_t>(r.bank_index().value_or(0));
  r.reaction("work").triggered_by(in).effects(out).body([in, out, k](ReactionContext& ctx) {
    const auto v = *ctx.get(in);
    ctx.set(out, v * v + k);
  });
  return Worker{in, out};
}

/// Source with a multiport of width `w` that emits on `rounds` consecutive
/// microsteps.
Output<std::int64_t> source(Builder& b, std::uint32_t w, std::size_t rounds) {
  auto r = b.reactor("src");
  auto out = r.output<std::int64_t>("out", w);
  auto again = r.logical_action<std::int64_t>("again");
  auto n = static_cast<std::int64_t>(rounds);
  r.reaction("emit").triggered_by(startup, again).effects(out, again).body(
      [out, again, w, n](ReactionContext& ctx) {
        const std::int64_t round = ctx.is_present(again) ? *ctx.get(again) : 0;
        for (std::uint32_t i = 0; i < w; ++i) ctx.set(out, i, round * 7 + i + 1);
        if (round + 1 < n) ctx.schedule(again, round + 1);
      });
  return out;
}

Input<std::int64_t> sink(Builder& b, std::uint32_t w, std::shared_ptr<Collected> out) {
  auto r = b.reactor("dst");
  auto in = r.input<std::int64_t>("in", w);
  if (out) out->lanes.assign(1, {});
  r.reaction("collect").triggered_by(in).body([in, out](ReactionContext& ctx) {
    std::int64_t sum = 0;
    for (auto [i, v] : ctx.present(in)) sum = sum * 31 + static_cast<std::int64_t>(i) + v;
    if (out) out->lanes[0].push_back(sum);
  });
  return in;
}

}  // namespace

Topology fork_join(std::size_t w, std::size_t rounds, std::shared_ptr<Collected> out) {
  const auto width = static_cast<std::uint32_t>(w);
  return build_topology([&](Builder& b) {
    auto src = source(b, width, rounds);
    auto dst = sink(b, width, out);
    auto wrk = b.bank("wrk", w, worker);
    connect(b, {ports(src)}, {ports(wrk, &Worker::in)});
    connect(b, {ports(wrk, &Worker::out)}, {ports(dst)});
  });
}

Topology fork_join_broadcast(std::size_t w, std::size_t rounds, std::shared_ptr<Collected> out) {
  const auto width = static_cast<std::uint32_t>(w);
  return build_topology([&](Builder& b) {
    auto src = source(b, 1, rounds);
    auto dst = sink(b, width, out);
    auto wrk = b.bank("wrk", w, worker);
    connect(b, {ports(src)}, {ports(wrk, &Worker::in)}, /*broadcast=*/true);
    connect(b, {ports(wrk, &Worker::out)}, {ports(dst)});
  });
}

Topology cascade(std::size_t n, std::size_t rounds, std::shared_ptr<Collected> out) {
  return build_topology([&](Builder& b) {
    auto src = source(b, 1, rounds);
    auto dst = sink(b, 1, out);
    auto wrk = b.bank("wrk", n, worker);
    connect(b, {ports(src), ports(wrk, &Worker::out)}, {ports(wrk, &Worker::in), ports(dst)});
  });
}

namespace {

struct Node {
  Input<std::int64_t> in;
  Output<std::int64_t> out;
};

}  // namespace

Topology bank_multiports(std::size_t w, bool interleave, std::size_t rounds,
                         std::shared_ptr<Collected> out) {
  const auto width = static_cast<std::uint32_t>(w);
  const auto n = static_cast<std::int64_t>(rounds);
  if (out) out->lanes.assign(w, {});
  return build_topology([&](Builder& b) {
    auto nodes = b.bank("node", w, [&](ReactorBuilder& r) {
      auto in = r.input<std::int64_t>("in", width);
      auto o = r.output<std::int64_t>("out", width);
      auto again = r.logical_action<std::int64_t>("again");
      const auto k = static_cast<std::int64_t>(*r.bank_index());
      r.reaction("send").triggered_by(startup, again).effects(o, again).body(
          [o, again, k, width, n](ReactionContext& ctx) {
            const std::int64_t round = ctx.is_present(again) ? *ctx.get(again) : 0;
            for (std::uint32_t j = 0; j < width; ++j) ctx.set(o, j, k * 100 + j + round * 1000);
            if (round + 1 < n) ctx.schedule(again, round + 1);
          });
      r.reaction("recv").triggered_by(in).body([in, out, k](ReactionContext& ctx) {
        std::int64_t sum = 0;
        for (auto [i, v] : ctx.present(in)) sum = sum * 31 + static_cast<std::int64_t>(i) + v;
        if (out) out->lanes[static_cast<std::size_t>(k)].push_back(sum);
      });
      return Node{in, o};
    });
    auto lhs = ports(nodes, &Node::out);
    if (interleave) lhs = interleaved(lhs);
    connect(b, {lhs}, {ports(nodes, &Node::in)});
  });
}

Topology fork_join_shape(std::size_t w) { return fork_join(w, 1, nullptr); }
Topology fork_join_broadcast_shape(std::size_t w) { return fork_join_broadcast(w, 1, nullptr); }
Topology cascade_shape(std::size_t n) { return cascade(n, 1, nullptr); }
Topology bank_multiports_shape(std::size_t w, bool interleave) {
  return bank_multiports(w, interleave, 1, nullptr);
}

}  // namespace detreact::fixtures
