#include "prb/graph.hpp"

#include <algorithm>
#include <string>

#include "prb/errors.hpp"
#include "prb/kernels.hpp"

namespace prb {

EvolvingGraph::EvolvingGraph(std::size_t num_nodes) {
  if (num_nodes == 0) {
    throw ConfigError("graph must have at least one node");
  }
  adjacency_.resize(num_nodes);
}

bool EvolvingGraph::add_edge(NodeId u, NodeId v) {
  if (u >= num_nodes() || v >= num_nodes()) {
    throw InvalidEdgeError("edge (" + std::to_string(u) + ", " +
                           std::to_string(v) + ") out of range for " +
                           std::to_string(num_nodes()) + " nodes");
  }
  if (u == v) {
    throw InvalidEdgeError("self-loop on node " + std::to_string(u));
  }
  auto& nu = adjacency_[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return false;
  nu.insert(it, v);
  auto& nv = adjacency_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++num_edges_;
  return true;
}

bool EvolvingGraph::has_edge(NodeId u, NodeId v) const {
  if (u >= num_nodes() || v >= num_nodes()) return false;
  const auto& nu = adjacency_[u];
  return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<std::size_t> EvolvingGraph::degrees() const {
  std::vector<std::size_t> out(num_nodes());
  for (std::size_t v = 0; v < num_nodes(); ++v) out[v] = adjacency_[v].size();
  return out;
}

std::vector<double> transition_apply(const EvolvingGraph& g,
                                     std::span<const double> x) {
  if (x.size() != g.num_nodes()) {
    throw DimensionError("transition_apply: vector length " +
                         std::to_string(x.size()) + " != " +
                         std::to_string(g.num_nodes()) + " nodes");
  }
  std::vector<double> out(x.size());
  kernels::transition_apply(g, x, out);
  return out;
}

}  // namespace prb
