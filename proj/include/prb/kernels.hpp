#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant; the two produce bit-identical output for any thread count.
// Reductions are summed over fixed-size blocks in block order so the result
// does not depend on how the loop was split across threads.

#include <cstddef>
#include <span>

#include "prb/graph.hpp"

namespace prb::kernels {

/// Block length used by every blocked reduction.
inline constexpr std::size_t kReduceBlock = 1024;

/// Below this many rows the dispatching kernels stay serial.
inline constexpr std::size_t kParallelThreshold = 4096;

namespace detail {

// Mean of x over the neighbors of v; zero for isolated nodes.
inline double row_mean(const EvolvingGraph& g, NodeId v,
                       std::span<const double> x) {
  const auto nbrs = g.neighbors(v);
  if (nbrs.empty()) return 0.0;
  double acc = 0.0;
  for (NodeId u : nbrs) acc += x[u];
  return acc / static_cast<double>(nbrs.size());
}

}  // namespace detail

namespace serial {

void transition_apply(const EvolvingGraph& g, std::span<const double> x,
                      std::span<double> out);

// out = alpha * P * v + (1 - alpha) * h; returns ||v - out||_1, which is the
// fixed-point residual of v.
double pagerank_sweep(const EvolvingGraph& g, double alpha,
                      std::span<const double> h, std::span<const double> v,
                      std::span<double> out);

double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace omp {

void transition_apply(const EvolvingGraph& g, std::span<const double> x,
                      std::span<double> out);

double pagerank_sweep(const EvolvingGraph& g, double alpha,
                      std::span<const double> h, std::span<const double> v,
                      std::span<double> out);

double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace omp

// Dispatch on problem size.
void transition_apply(const EvolvingGraph& g, std::span<const double> x,
                      std::span<double> out);
double pagerank_sweep(const EvolvingGraph& g, double alpha,
                      std::span<const double> h, std::span<const double> v,
                      std::span<double> out);

int max_threads();

}  // namespace prb::kernels
