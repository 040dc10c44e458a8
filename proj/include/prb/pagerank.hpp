#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "prb/graph.hpp"

namespace prb {

/// Dense length-n score vector (the restart vector h or its image v).
using ScoreVector = std::vector<double>;

struct PageRankConfig {
  double alpha = 0.85;         // damping, in [0, 1)
  double epsilon = 1e-6;       // L1 residual threshold
  std::size_t max_iters = 10000;

  void validate() const;
};

struct SolveResult {
  ScoreVector values;
  std::size_t iterations = 0;  // number of v <- alpha P v + (1 - alpha) h updates
  double residual = 0.0;       // ||v - alpha P v - (1 - alpha) h||_1 of values
};

/// Power iteration for v = alpha P v + (1 - alpha) h, started from
/// `warm_start` when given, else from (1 - alpha) h. Stops as soon as the
/// L1 residual of the current iterate is <= epsilon. Throws SolverError when
/// max_iters updates are not enough.
SolveResult solve(const EvolvingGraph& g, std::span<const double> h,
                  const PageRankConfig& cfg,
                  std::span<const double> warm_start = {});

/// Largest graph the dense oracle accepts.
inline constexpr std::size_t kDenseOracleLimit = 512;

/// Direct solve of (I - alpha P) v = (1 - alpha) h by Gaussian elimination
/// with partial pivoting. Test oracle; O(n^3).
ScoreVector solve_exact(const EvolvingGraph& g, std::span<const double> h,
                        double alpha);

/// ||v - alpha P v - (1 - alpha) h||_1
double fixed_point_residual(const EvolvingGraph& g, std::span<const double> v,
                            std::span<const double> h, double alpha);

/// LU factorisation of I - alpha P for one graph snapshot. Reused across
/// right-hand sides until the graph changes; the synthetic environment calls
/// it once per round with a fresh h.
class DenseFixedPointSolver {
 public:
  DenseFixedPointSolver(const EvolvingGraph& g, double alpha);

  ScoreVector solve(std::span<const double> h) const;
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  double alpha_;
  std::vector<double> lu_;            // row-major, unit-lower L below diagonal
  std::vector<std::size_t> pivots_;   // row swapped into position k at step k
};

}  // namespace prb
