#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "detreact/topology.hpp"

namespace detreact::fixtures {

/// Plain description of a random single-width topology.
struct RandomProgram {
  struct Reaction {
    std::vector<int> triggers;  // own input indices
    std::vector<int> uses;      // own input indices
    std::vector<int> effects;   // own output indices
    bool startup = false;
    bool schedules_action = false;  // self-loop through a logical action
  };
  struct Reactor {
    int inputs = 0;
    int outputs = 0;
    std::vector<Reaction> reactions;
  };
  struct Link {
    int from_reactor, from_output, to_reactor, to_input;
  };
  std::vector<Reactor> reactors;
  std::vector<Link> links;
};

RandomProgram random_program(std::mt19937_64& rng, int max_reactors = 10, int max_reactions = 4);

/// Builds the program; reaction ids follow declaration order (reactor by
/// reactor, lexical order within each).
Topology build(const RandomProgram& program);

/// Brute-force reference: edges from all connected writer/reader pairs plus
/// every same-reactor pair in lexical order; cycle check by transitive
/// closure; levels by memoized longest path. nullopt when cyclic.
std::optional<std::vector<std::uint32_t>> oracle_levels(const RandomProgram& program);

}  // namespace detreact::fixtures
