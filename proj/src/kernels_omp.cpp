#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "prb/kernels.hpp"

namespace prb::kernels {

namespace omp {

void transition_apply(const EvolvingGraph& g, std::span<const double> x,
                      std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(g.num_nodes());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    out[v] = detail::row_mean(g, static_cast<NodeId>(v), x);
  }
}

double pagerank_sweep(const EvolvingGraph& g, double alpha,
                      std::span<const double> h, std::span<const double> v,
                      std::span<double> out) {
  const std::size_t n = g.num_nodes();
  const auto blocks =
      static_cast<std::ptrdiff_t>((n + kReduceBlock - 1) / kReduceBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  const double restart = 1.0 - alpha;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t s = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t e = std::min(n, s + kReduceBlock);
    double block = 0.0;
    for (std::size_t i = s; i < e; ++i) {
      const double next =
          alpha * detail::row_mean(g, static_cast<NodeId>(i), v) +
          restart * h[i];
      out[i] = next;
      block += std::abs(v[i] - next);
    }
    partial[static_cast<std::size_t>(b)] = block;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const auto blocks =
      static_cast<std::ptrdiff_t>((n + kReduceBlock - 1) / kReduceBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::size_t s = static_cast<std::size_t>(blk) * kReduceBlock;
    const std::size_t e = std::min(n, s + kReduceBlock);
    double acc = 0.0;
    for (std::size_t i = s; i < e; ++i) acc += std::abs(a[i] - b[i]);
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace omp

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace prb::kernels
