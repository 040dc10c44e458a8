#include <algorithm>
#include <cmath>

#include "prb/kernels.hpp"

namespace prb::kernels {

namespace serial {

void transition_apply(const EvolvingGraph& g, std::span<const double> x,
                      std::span<double> out) {
  const std::size_t n = g.num_nodes();
  for (std::size_t v = 0; v < n; ++v) {
    out[v] = detail::row_mean(g, static_cast<NodeId>(v), x);
  }
}

double pagerank_sweep(const EvolvingGraph& g, double alpha,
                      std::span<const double> h, std::span<const double> v,
                      std::span<double> out) {
  const std::size_t n = g.num_nodes();
  const double restart = 1.0 - alpha;
  double total = 0.0;
  for (std::size_t b = 0; b < n; b += kReduceBlock) {
    const std::size_t e = std::min(n, b + kReduceBlock);
    double block = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double next =
          alpha * detail::row_mean(g, static_cast<NodeId>(i), v) + restart * h[i];
      out[i] = next;
      block += std::abs(v[i] - next);
    }
    total += block;
  }
  return total;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t s = 0; s < n; s += kReduceBlock) {
    const std::size_t e = std::min(n, s + kReduceBlock);
    double block = 0.0;
    for (std::size_t i = s; i < e; ++i) block += std::abs(a[i] - b[i]);
    total += block;
  }
  return total;
}

}  // namespace serial

void transition_apply(const EvolvingGraph& g, std::span<const double> x,
                      std::span<double> out) {
  if (g.num_nodes() >= kParallelThreshold) {
    omp::transition_apply(g, x, out);
  } else {
    serial::transition_apply(g, x, out);
  }
}

double pagerank_sweep(const EvolvingGraph& g, double alpha,
                      std::span<const double> h, std::span<const double> v,
                      std::span<double> out) {
  if (g.num_nodes() >= kParallelThreshold) {
    return omp::pagerank_sweep(g, alpha, h, v, out);
  }
  return serial::pagerank_sweep(g, alpha, h, v, out);
}

}  // namespace prb::kernels
