#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "prb/graph.hpp"

namespace prb {

/// One decision round: a serving node, k candidate nodes and one unit-norm
/// context per candidate.
struct RoundSpec {
  NodeId serving = 0;
  std::vector<NodeId> candidates;
  std::vector<std::vector<double>> contexts;

  // Environment-private. Binary environments fill positives (indices into
  // candidates); the synthetic environment fills oracle_values with the
  // optimal expected reward of every candidate.
  std::vector<std::size_t> positives;
  std::vector<double> oracle_values;

  std::size_t num_candidates() const noexcept { return candidates.size(); }
};

struct EnvOutcome {
  int reward = 0;
  double regret = 0.0;
  std::optional<std::pair<NodeId, NodeId>> graph_delta;
};

}  // namespace prb
