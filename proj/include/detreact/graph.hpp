#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "detreact/errors.hpp"
#include "detreact/ids.hpp"
#include "detreact/topology.hpp"

namespace detreact {

enum class EdgeKind : std::uint8_t { data, priority };

struct ApgEdge {
  ReactionId from;
  ReactionId to;
  EdgeKind kind;
  friend bool operator==(const ApgEdge&, const ApgEdge&) = default;
};

/// One dependency cycle; consecutive entries are APG edges and the first
/// entry is repeated at the end.
struct CycleDiagnostic {
  std::vector<ReactionId> cycle;

  /// "a.1 -> b.1 -> a.1"
  [[nodiscard]] std::string describe(const Topology& topology) const;
};

/// Acyclic precedence graph over the reactions of one topology.
///
/// Data edges follow connections from a writer's output effect to every
/// reaction triggered by (or using) the connected input. Priority edges
/// link lexically adjacent reactions of the same reactor. Logical actions
/// do not produce edges. Levels are longest-path distances from sources.
class Apg {
 public:
  [[nodiscard]] std::size_t size() const noexcept { return level_.size(); }
  [[nodiscard]] std::uint32_t level(ReactionId r) const { return level_.at(r.index()); }
  [[nodiscard]] std::span<const std::uint32_t> levels() const noexcept { return level_; }
  [[nodiscard]] std::span<const ApgEdge> edges() const noexcept { return edges_; }
  [[nodiscard]] std::span<const ReactionId> successors(ReactionId r) const {
    return successors_.at(r.index());
  }

  /// Number of distinct levels (0 for an empty graph).
  [[nodiscard]] std::size_t level_count() const noexcept { return by_level_.size(); }

  /// Reactions at `level`, in reaction-id order.
  [[nodiscard]] std::span<const ReactionId> at_level(std::size_t level) const {
    return by_level_.at(level);
  }

  /// True if `to` is reachable from `from` (from != to).
  [[nodiscard]] bool reaches(ReactionId from, ReactionId to) const;

 private:
  friend std::variant<Apg, CycleDiagnostic> build_apg(const Topology&);

  std::vector<std::uint32_t> level_;
  std::vector<ApgEdge> edges_;
  std::vector<std::vector<ReactionId>> successors_;
  std::vector<std::vector<ReactionId>> by_level_;
};

/// Raised when an environment is created over a cyclic topology.
class CausalityError : public CompositionError {
 public:
  CausalityError(CycleDiagnostic diagnostic, const std::string& what)
      : CompositionError(what), diagnostic_(std::move(diagnostic)) {}
  [[nodiscard]] const CycleDiagnostic& diagnostic() const noexcept { return diagnostic_; }

 private:
  CycleDiagnostic diagnostic_;
};

[[nodiscard]] std::variant<Apg, CycleDiagnostic> build_apg(const Topology& topology);

/// Builds the APG or throws CausalityError.
[[nodiscard]] Apg build_apg_or_throw(const Topology& topology);

/// Largest number of reactions sharing one level; 0 for an empty graph.
[[nodiscard]] std::size_t max_level_width(const Apg& apg) noexcept;

/// Graphviz export. Nodes are named "reactor.index"; priority edges are dashed.
[[nodiscard]] std::string to_dot(const Apg& apg, const Topology& topology);

}  // namespace detreact
