#include "detreact/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace detreact {

namespace {

std::vector<std::vector<ReactionId>> readers_by_port(const Topology& t) {
  std::vector<std::vector<ReactionId>> readers(t.ports().size());
  const auto reactions = t.reactions();
  for (std::size_t i = 0; i < reactions.size(); ++i) {
    ReactionId id{i};
    auto add = [&](PortId p) {
      auto& v = readers[p.index()];
      if (v.empty() || v.back() != id) v.push_back(id);
    };
    for (const auto& trig : reactions[i].triggers) {
      if (const auto* p = std::get_if<PortId>(&trig)) add(*p);
    }
    for (PortId p : reactions[i].uses) add(p);
  }
  return readers;
}

}  // namespace

bool Apg::reaches(ReactionId from, ReactionId to) const {
  if (from == to) return false;
  // Levels strictly increase along edges, so only lower-level nodes need expanding.
  if (level(from) >= level(to)) return false;
  std::vector<bool> seen(size());
  std::vector<ReactionId> stack{from};
  while (!stack.empty()) {
    ReactionId u = stack.back();
    stack.pop_back();
    for (ReactionId v : successors(u)) {
      if (v == to) return true;
      if (!seen[v.index()] && level(v) < level(to)) {
        seen[v.index()] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

std::string CycleDiagnostic::describe(const Topology& topology) const {
  std::string out;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i != 0) out += " -> ";
    out += topology.reaction_path(cycle[i]);
  }
  return out;
}

std::variant<Apg, CycleDiagnostic> build_apg(const Topology& t) {
  const std::size_t n = t.reactions().size();
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<ApgEdge> edges;
  auto add_edge = [&](ReactionId u, ReactionId v, EdgeKind kind) {
    if (seen.emplace(u.value, v.value).second) edges.push_back({u, v, kind});
  };

  const auto readers = readers_by_port(t);
  for (std::size_t i = 0; i < n; ++i) {
    ReactionId u{i};
    for (const auto& eff : t.reactions()[i].effects) {
      const auto* p = std::get_if<PortId>(&eff);
      if (p == nullptr) continue;  // logical actions break the dependency
      const auto& port = t.port(*p);
      for (std::uint32_t c = 0; c < port.width; ++c) {
        for (ChannelId dst : t.downstream(t.channel_of(*p, c))) {
          for (ReactionId v : readers[t.channel(dst).port.index()]) add_edge(u, v, EdgeKind::data);
        }
      }
    }
  }
  for (const auto& r : t.reactors()) {
    for (std::size_t k = 1; k < r.reactions.size(); ++k) {
      add_edge(r.reactions[k - 1], r.reactions[k], EdgeKind::priority);
    }
  }

  std::vector<std::vector<ReactionId>> succ(n);
  std::vector<std::uint32_t> indegree(n, 0);
  for (const auto& e : edges) {
    succ[e.from.index()].push_back(e.to);
    ++indegree[e.to.index()];
  }
  for (auto& s : succ) std::sort(s.begin(), s.end());

  // Kahn's algorithm; level(v) = 1 + max level over predecessors.
  std::vector<std::uint32_t> level(n, 0);
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t processed = 0;
  auto remaining = indegree;
  while (!ready.empty()) {
    const std::size_t u = ready.front();
    ready.pop_front();
    ++processed;
    for (ReactionId v : succ[u]) {
      level[v.index()] = std::max(level[v.index()], level[u] + 1);
      if (--remaining[v.index()] == 0) ready.push_back(v.index());
    }
  }

  if (processed != n) {
    // Nodes with a nonzero remaining count lie on or downstream of a cycle.
    // A DFS restricted to them finds a back edge.
    std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<ReactionId> path;
    CycleDiagnostic diag;
    auto dfs = [&](auto&& self, std::size_t u) -> bool {
      state[u] = 1;
      path.push_back(ReactionId{u});
      for (ReactionId v : succ[u]) {
        if (remaining[v.index()] == 0) continue;
        if (state[v.index()] == 1) {
          auto it = std::find(path.begin(), path.end(), v);
          diag.cycle.assign(it, path.end());
          diag.cycle.push_back(v);
          return true;
        }
        if (state[v.index()] == 0 && self(self, v.index())) return true;
      }
      path.pop_back();
      state[u] = 2;
      return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] != 0 && state[i] == 0 && dfs(dfs, i)) break;
    }
    return diag;
  }

  Apg apg;
  apg.level_ = std::move(level);
  apg.edges_ = std::move(edges);
  apg.successors_ = std::move(succ);
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = apg.level_[i];
    if (apg.by_level_.size() <= l) apg.by_level_.resize(l + 1);
    apg.by_level_[l].push_back(ReactionId{i});
  }
  return apg;
}

Apg build_apg_or_throw(const Topology& topology) {
  auto result = build_apg(topology);
  if (auto* diag = std::get_if<CycleDiagnostic>(&result)) {
    std::string what = "causality cycle: " + diag->describe(topology);
    throw CausalityError(std::move(*diag), what);
  }
  return std::get<Apg>(std::move(result));
}

std::size_t max_level_width(const Apg& apg) noexcept {
  std::size_t best = 0;
  for (std::size_t l = 0; l < apg.level_count(); ++l) best = std::max(best, apg.at_level(l).size());
  return best;
}

std::string to_dot(const Apg& apg, const Topology& topology) {
  std::ostringstream os;
  os << "digraph apg {\n";
  for (std::size_t i = 0; i < apg.size(); ++i) {
    const auto path = topology.reaction_path(ReactionId{i});
    os << "  \"" << path << "\" [label=\"" << path << "\\nlevel " << apg.levels()[i] << "\"];\n";
  }
  for (const auto& e : apg.edges()) {
    os << "  \"" << topology.reaction_path(e.from) << "\" -> \"" << topology.reaction_path(e.to)
       << '"';
    if (e.kind == EdgeKind::priority) os << " [style=dashed]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace detreact
