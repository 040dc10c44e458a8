#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "prb/errors.hpp"
#include "prb/pagerank.hpp"

using namespace prb;

namespace {

EvolvingGraph random_graph(std::size_t n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0, 1);
  EvolvingGraph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (unit(rng) < density) g.add_edge(u, v);
  return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("alpha = 0 returns h exactly") {
  std::mt19937_64 rng(1);
  auto g = random_graph(12, 0.3, rng);
  std::vector<double> h(12);
  std::normal_distribution<double> normal;
  for (auto& x : h) x = normal(rng);
  PageRankConfig cfg;
  cfg.alpha = 0.0;
  CHECK(solve(g, h, cfg).values == h);
  CHECK(solve(g, h, cfg, std::vector<double>(12, 3.0)).values == h);
}

TEST_CASE("empty graph gives (1 - alpha) h") {
  EvolvingGraph g(3);
  const auto r = solve(g, std::vector<double>{1, 0, 0}, PageRankConfig{});
  CHECK(r.values[0] == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(r.values[1] == 0.0);
  CHECK(r.values[2] == 0.0);
  CHECK(r.iterations == 0);
}

TEST_CASE("two-node closed form") {
  // v0 = 0.5 v1 + 0.5, v1 = 0.5 v0  =>  v = (2/3, 1/3)
  EvolvingGraph g(2);
  g.add_edge(0, 1);
  PageRankConfig cfg;
  cfg.alpha = 0.5;
  const std::vector<double> h{1, 0};
  const auto it = solve(g, h, cfg);
  CHECK(it.values[0] == doctest::Approx(2.0 / 3).epsilon(1e-6));
  CHECK(it.values[1] == doctest::Approx(1.0 / 3).epsilon(1e-6));
  const auto ex = solve_exact(g, h, 0.5);
  CHECK(std::abs(ex[0] - 2.0 / 3) < 1e-12);
  CHECK(std::abs(ex[1] - 1.0 / 3) < 1e-12);
}

TEST_CASE("solve_exact matches the trivial solve examples") {
  EvolvingGraph empty(3);
  const auto a = solve_exact(empty, std::vector<double>{1, 0, 0}, 0.85);
  CHECK(std::abs(a[0] - 0.15) < 1e-9);
  std::mt19937_64 rng(2);
  auto g = random_graph(9, 0.4, rng);
  std::vector<double> h{0.3, -1, 2, 0, 0, 1, 5, 0.1, 0};
  CHECK(max_abs_diff(solve_exact(g, h, 0.0), h) < 1e-9);
}

TEST_CASE("solve_exact residual on random 10-node graphs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(10, 0.3, rng);
    std::vector<double> h(10);
    for (auto& x : h) x = unit(rng);
    const double alpha = 0.9 * unit(rng);
    const auto v = solve_exact(g, h, alpha);
    CHECK(fixed_point_residual(g, v, h, alpha) <= 1e-10);
  }
}

TEST_CASE("solve_exact refuses large graphs") {
  EvolvingGraph g(kDenseOracleLimit + 1);
  CHECK_THROWS_AS(solve_exact(g, std::vector<double>(g.num_nodes()), 0.5),
                  OracleSizeError);
}

TEST_CASE("config validation and errors") {
  EvolvingGraph g(3);
  PageRankConfig cfg;
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(solve(g, std::vector<double>(3), cfg), ConfigError);
  cfg.alpha = 0.5;
  CHECK_THROWS_AS(solve(g, std::vector<double>(2), cfg), DimensionError);

  g.add_edge(0, 1);
  cfg.alpha = 0.99;
  cfg.max_iters = 3;
  try {
    solve(g, std::vector<double>{1, 0, 0}, cfg);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual() > cfg.epsilon);
    CHECK(e.iterations() == 3);
  }
}

TEST_CASE("random instances: residual, oracle agreement, positivity, scaling") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    auto g = random_graph(n, 0.3 * unit(rng), rng);
    std::vector<double> h(n);
    for (auto& x : h) x = unit(rng) < 0.5 ? unit(rng) : 0.0;
    PageRankConfig cfg;
    cfg.alpha = 0.95 * unit(rng);

    const auto r = solve(g, h, cfg);
    CHECK(r.residual <= cfg.epsilon);
    CHECK(fixed_point_residual(g, r.values, h, cfg.alpha) <= cfg.epsilon * (1 + 1e-9));

    const auto exact = solve_exact(g, h, cfg.alpha);
    CHECK(max_abs_diff(r.values, exact) <= 10 * cfg.epsilon);

    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.values[i] >= 0.0);
      CHECK(r.values[i] >= (1 - cfg.alpha) * h[i] - 1e-15);
    }

    // scaling h scales the exact fixed point
    const double c = 0.1 + 5 * unit(rng);
    std::vector<double> ch(n);
    for (std::size_t i = 0; i < n; ++i) ch[i] = c * h[i];
    const auto scaled = solve_exact(g, ch, cfg.alpha);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(scaled[i] == doctest::Approx(c * exact[i]).epsilon(1e-9));
    }

    // warm start: same answer within the contract, usually fewer iterations
    std::vector<double> warm = exact;
    for (auto& w : warm) w += 1e-4 * unit(rng);
    const auto ws = solve(g, h, cfg, warm);
    CHECK(ws.residual <= cfg.epsilon);
    CHECK(max_abs_diff(ws.values, exact) <= 10 * cfg.epsilon);
  }
}

TEST_CASE("iteration count bounds") {
  // Residuals contract at rate alpha in the max norm, so the L1 residual
  // reaches epsilon within ceil(log(eps / (n * r0)) / log(alpha)) updates.
  // On regular graphs the L1 norm itself contracts and the n factor drops.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0, 1);
  auto bound = [](double eps, double r0, double alpha) {
    return static_cast<std::size_t>(
        std::ceil(std::log(eps / r0) / std::log(alpha)));
  };
  for (double alpha : {0.3, 0.5, 0.85, 0.95}) {
    for (std::size_t n : {8u, 30u, 64u}) {
      // cycle: 2-regular
      EvolvingGraph cycle(n);
      for (NodeId i = 0; i < n; ++i) cycle.add_edge(i, static_cast<NodeId>((i + 1) % n));
      std::vector<double> h(n);
      for (auto& x : h) x = unit(rng);
      PageRankConfig cfg;
      cfg.alpha = alpha;
      std::vector<double> start(n), next(n);
      for (std::size_t i = 0; i < n; ++i) start[i] = (1 - alpha) * h[i];
      const double r0 = fixed_point_residual(cycle, start, h, alpha);
      const auto r = solve(cycle, h, cfg);
      CHECK(r.iterations <= std::max<std::size_t>(bound(cfg.epsilon, r0, alpha), 0));

      auto g = random_graph(n, 0.2, rng);
      const double r0g = fixed_point_residual(g, start, h, alpha);
      const auto rg = solve(g, h, cfg);
      CHECK(rg.iterations <=
            bound(cfg.epsilon, static_cast<double>(n) * r0g, alpha) + 1);
    }
  }
}

TEST_CASE("candidate argmax on a hub graph favours the connected candidate") {
  // Candidates 0 and 1 have equal scores; node 1 sits next to nodes 2..5
  // which carry score mass, node 0 is isolated.
  EvolvingGraph g(6);
  for (NodeId u = 2; u < 6; ++u) g.add_edge(1, u);
  std::vector<double> h{1, 1, 0.5, 0.5, 0.5, 0.5};
  PageRankConfig cfg;
  const auto v = solve(g, h, cfg).values;
  const auto ex = solve_exact(g, h, cfg.alpha);
  CHECK(v[1] > v[0]);
  CHECK(ex[1] > ex[0]);
}
