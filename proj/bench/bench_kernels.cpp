// Serial reference kernels against their OpenMP counterparts. The pool-scoring
// benchmark uses a real policy so it covers the forward/gradient path too.

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "prb/datasets.hpp"
#include "prb/kernels.hpp"
#include "prb/policy.hpp"

namespace {

using namespace prb;

struct Fixture {
  EvolvingGraph graph;
  std::vector<double> x, h, out;

  explicit Fixture(std::size_t n) : graph(n), x(n), h(n), out(n) {
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    std::uniform_real_distribution<double> unit(0, 1);
    for (std::size_t e = 0; e < 8 * n; ++e) {
      const NodeId u = pick(rng), v = pick(rng);
      if (u != v) graph.add_edge(u, v);
    }
    for (auto& v : x) v = unit(rng);
    for (auto& v : h) v = unit(rng);
  }
};

const Fixture& fixture(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
  return it->second;
}

template <bool Parallel>
void BM_TransitionApply(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(f.x.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::transition_apply(f.graph, f.x, out);
    } else {
      kernels::serial::transition_apply(f.graph, f.x, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_PageRankSweep(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(f.x.size());
  for (auto _ : state) {
    double r;
    if constexpr (Parallel) {
      r = kernels::omp::pagerank_sweep(f.graph, 0.85, f.h, f.x, out);
    } else {
      r = kernels::serial::pagerank_sweep(f.graph, 0.85, f.h, f.x, out);
    }
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScorePool(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  PolicyConfig cfg;
  cfg.kind = PolicyKind::prb;
  Policy policy(cfg, 20, 1);
  std::mt19937_64 rng(3);
  RoundSpec round;
  for (std::size_t i = 0; i < k; ++i) {
    round.candidates.push_back(static_cast<NodeId>(i));
    round.contexts.push_back(random_unit_vector(20, rng));
  }
  for (auto _ : state) {
    auto s = policy.score_exploit_explore(round);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = static_cast<double>(kernels::max_threads());
}

}  // namespace

BENCHMARK(BM_TransitionApply<false>)->Name("transition_apply/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_TransitionApply<true>)->Name("transition_apply/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_PageRankSweep<false>)->Name("pagerank_sweep/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_PageRankSweep<true>)->Name("pagerank_sweep/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_ScorePool)->Arg(20)->Arg(100);

BENCHMARK_MAIN();
