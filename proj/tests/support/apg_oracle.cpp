#include "apg_oracle.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace detreact::fixtures {

RandomProgram random_program(std::mt19937_64& rng, int max_reactors, int max_reactions) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  RandomProgram prog;
  prog.reactors.resize(static_cast<std::size_t>(pick(1, max_reactors)));
  for (auto& r : prog.reactors) {
    r.inputs = pick(0, 3);
    r.outputs = pick(0, 3);
    r.reactions.resize(static_cast<std::size_t>(pick(1, max_reactions)));
    for (auto& rx : r.reactions) {
      for (int i = 0; i < r.inputs; ++i) {
        if (coin(0.4)) {
          rx.triggers.push_back(i);
        } else if (coin(0.2)) {
          rx.uses.push_back(i);
        }
      }
      for (int o = 0; o < r.outputs; ++o) {
        if (coin(0.5)) rx.effects.push_back(o);
      }
      rx.schedules_action = coin(0.2);
      rx.startup = rx.triggers.empty() || coin(0.2);
    }
  }
  const int n = static_cast<int>(prog.reactors.size());
  for (int to = 0; to < n; ++to) {
    for (int i = 0; i < prog.reactors[static_cast<std::size_t>(to)].inputs; ++i) {
      if (!coin(0.7)) continue;
      const int from = pick(0, n - 1);
      const int outs = prog.reactors[static_cast<std::size_t>(from)].outputs;
      if (outs == 0) continue;
      prog.links.push_back({from, pick(0, outs - 1), to, i});
    }
  }
  return prog;
}

Topology build(const RandomProgram& prog) {
  return build_topology([&](Builder& b) {
    std::vector<std::vector<Input<int>>> ins(prog.reactors.size());
    std::vector<std::vector<Output<int>>> outs(prog.reactors.size());
    for (std::size_t k = 0; k < prog.reactors.size(); ++k) {
      const auto& spec = prog.reactors[k];
      auto r = b.reactor("r" + std::to_string(k));
      for (int i = 0; i < spec.inputs; ++i) ins[k].push_back(r.input<int>("in" + std::to_string(i)));
      for (int o = 0; o < spec.outputs; ++o) {
        outs[k].push_back(r.output<int>("out" + std::to_string(o)));
      }
      auto act = r.logical_action<int>("loop");
      for (const auto& rx : spec.reactions) {
        auto rb = r.reaction();
        if (rx.startup) rb.triggered_by(startup);
        if (rx.schedules_action) {
          rb.triggered_by(act);
          rb.effects(act);
        }
        for (int i : rx.triggers) rb.triggered_by(ins[k][static_cast<std::size_t>(i)]);
        for (int i : rx.uses) rb.uses(ins[k][static_cast<std::size_t>(i)]);
        for (int o : rx.effects) rb.effects(outs[k][static_cast<std::size_t>(o)]);
        rb.body([](ReactionContext&) {});
      }
    }
    for (const auto& l : prog.links) {
      b.connect(outs[static_cast<std::size_t>(l.from_reactor)][static_cast<std::size_t>(l.from_output)],
                ins[static_cast<std::size_t>(l.to_reactor)][static_cast<std::size_t>(l.to_input)]);
    }
  });
}

std::optional<std::vector<std::uint32_t>> oracle_levels(const RandomProgram& prog) {
  struct Node {
    int reactor;
    const RandomProgram::Reaction* rx;
  };
  std::vector<Node> nodes;
  for (std::size_t k = 0; k < prog.reactors.size(); ++k) {
    for (const auto& rx : prog.reactors[k].reactions) nodes.push_back({static_cast<int>(k), &rx});
  }
  const std::size_t n = nodes.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  auto reads = [](const RandomProgram::Reaction& rx, int input) {
    return std::count(rx.triggers.begin(), rx.triggers.end(), input) > 0 ||
           std::count(rx.uses.begin(), rx.uses.end(), input) > 0;
  };
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (nodes[u].reactor == nodes[v].reactor && u < v) adj[u][v] = 1;
      for (const auto& l : prog.links) {
        if (l.from_reactor != nodes[u].reactor || l.to_reactor != nodes[v].reactor) continue;
        const auto& eff = nodes[u].rx->effects;
        if (std::count(eff.begin(), eff.end(), l.from_output) > 0 && reads(*nodes[v].rx, l.to_input)) {
          adj[u][v] = 1;
        }
      }
    }
  }
  auto reach = adj;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reach[i][i]) return std::nullopt;
  }
  std::vector<int> memo(n, -1);
  std::function<int(std::size_t)> depth = [&](std::size_t v) {
    if (memo[v] >= 0) return memo[v];
    int best = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (adj[p][v]) best = std::max(best, depth(p) + 1);
    }
    return memo[v] = best;
  };
  std::vector<std::uint32_t> levels(n);
  for (std::size_t v = 0; v < n; ++v) levels[v] = static_cast<std::uint32_t>(depth(v));
  return levels;
}

}  // namespace detreact::fixtures
