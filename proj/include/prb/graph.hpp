#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace prb {

using NodeId = std::uint32_t;

/// Simple undirected graph that only ever grows. Node set is fixed at
/// construction; edges are inserted one at a time as links are confirmed.
///
/// Adjacency lists are kept sorted so that equality and membership checks are
/// cheap and iteration order is deterministic.
class EvolvingGraph {
 public:
  explicit EvolvingGraph(std::size_t num_nodes);

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  /// Inserts {u, v}. Returns false when the edge already existed (no-op).
  /// Throws InvalidEdgeError on self-loops or out-of-range ids.
  bool add_edge(NodeId u, NodeId v);

  bool has_edge(NodeId u, NodeId v) const;

  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::vector<std::size_t> degrees() const;

  bool operator==(const EvolvingGraph&) const = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t num_edges_ = 0;
};

/// Returns P x with P = D^-1 A. Rows of isolated nodes are zero.
std::vector<double> transition_apply(const EvolvingGraph& g,
                                     std::span<const double> x);

}  // namespace prb
