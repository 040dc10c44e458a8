#include "prb/pagerank.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "prb/errors.hpp"
#include "prb/kernels.hpp"

namespace prb {

void PageRankConfig::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ConfigError("pagerank alpha must lie in [0, 1), got " +
                      std::to_string(alpha));
  }
  if (!(epsilon > 0.0)) {
    throw ConfigError("pagerank epsilon must be > 0, got " +
                      std::to_string(epsilon));
  }
  if (max_iters < 1) {
    throw ConfigError("pagerank max_iters must be >= 1");
  }
}

namespace {

void check_length(std::span<const double> x, std::size_t n, const char* what) {
  if (x.size() != n) {
    throw DimensionError(std::string(what) + ": length " +
                         std::to_string(x.size()) + " != " + std::to_string(n) +
                         " nodes");
  }
}

}  // namespace

SolveResult solve(const EvolvingGraph& g, std::span<const double> h,
                  const PageRankConfig& cfg,
                  std::span<const double> warm_start) {
  cfg.validate();
  const std::size_t n = g.num_nodes();
  check_length(h, n, "pagerank h");

  ScoreVector v(n);
  if (!warm_start.empty()) {
    check_length(warm_start, n, "pagerank warm start");
    v.assign(warm_start.begin(), warm_start.end());
  } else {
    for (std::size_t i = 0; i < n; ++i) v[i] = (1.0 - cfg.alpha) * h[i];
  }

  ScoreVector next(n);
  for (std::size_t it = 0;; ++it) {
    const double residual = kernels::pagerank_sweep(g, cfg.alpha, h, v, next);
    if (!std::isfinite(residual)) {
      throw SolverError("pagerank residual is not finite", residual, it);
    }
    if (residual <= cfg.epsilon) {
      return SolveResult{std::move(v), it, residual};
    }
    if (it == cfg.max_iters) {
      throw SolverError("pagerank did not reach epsilon " +
                            std::to_string(cfg.epsilon) + " within " +
                            std::to_string(cfg.max_iters) +
                            " iterations (residual " +
                            std::to_string(residual) + ")",
                        residual, it);
    }
    v.swap(next);
  }
}

double fixed_point_residual(const EvolvingGraph& g, std::span<const double> v,
                            std::span<const double> h, double alpha) {
  const std::size_t n = g.num_nodes();
  check_length(v, n, "residual v");
  check_length(h, n, "residual h");
  ScoreVector next(n);
  return kernels::serial::pagerank_sweep(g, alpha, h, v, next);
}

DenseFixedPointSolver::DenseFixedPointSolver(const EvolvingGraph& g,
                                             double alpha)
    : n_(g.num_nodes()), alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ConfigError("dense solver alpha must lie in [0, 1)");
  }
  if (n_ > kDenseOracleLimit) {
    throw OracleSizeError("dense oracle limited to " +
                          std::to_string(kDenseOracleLimit) + " nodes, got " +
                          std::to_string(n_));
  }
  const std::size_t n = n_;
  lu_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    lu_[i * n + i] = 1.0;
    const auto nbrs = g.neighbors(static_cast<NodeId>(i));
    if (nbrs.empty()) continue;
    const double w = alpha / static_cast<double>(nbrs.size());
    for (NodeId j : nbrs) lu_[i * n + j] -= w;
  }

  pivots_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_[k * n + k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double a = std::abs(lu_[r * n + k]);
      if (a > best) {
        best = a;
        p = r;
      }
    }
    pivots_[k] = p;
    if (best == 0.0) {
      throw SolverError("singular fixed-point system", 0.0, k);
    }
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(lu_[k * n + c], lu_[p * n + c]);
      }
    }
    const double pivot = lu_[k * n + k];
    for (std::size_t r = k + 1; r < n; ++r) {
      double& lrk = lu_[r * n + k];
      if (lrk == 0.0) continue;
      lrk /= pivot;
      const double f = lrk;
      double* row = &lu_[r * n];
      const double* krow = &lu_[k * n];
      for (std::size_t c = k + 1; c < n; ++c) row[c] -= f * krow[c];
    }
  }
}

ScoreVector DenseFixedPointSolver::solve(std::span<const double> h) const {
  check_length(h, n_, "dense solver h");
  const std::size_t n = n_;
  ScoreVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (1.0 - alpha_) * h[i];
  for (std::size_t k = 0; k < n; ++k) {
    if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
  }
  // forward substitution, unit lower
  for (std::size_t i = 0; i < n; ++i) {
    double acc = x[i];
    const double* row = &lu_[i * n];
    for (std::size_t c = 0; c < i; ++c) acc -= row[c] * x[c];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    const double* row = &lu_[i * n];
    for (std::size_t c = i + 1; c < n; ++c) acc -= row[c] * x[c];
    x[i] = acc / row[i];
  }
  return x;
}

ScoreVector solve_exact(const EvolvingGraph& g, std::span<const double> h,
                        double alpha) {
  if (g.num_nodes() > kDenseOracleLimit) {
    throw OracleSizeError("solve_exact limited to " +
                          std::to_string(kDenseOracleLimit) + " nodes");
  }
  check_length(h, g.num_nodes(), "solve_exact h");
  return DenseFixedPointSolver(g, alpha).solve(h);
}

}  // namespace prb
