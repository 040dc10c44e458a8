#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "prb/mlp.hpp"

namespace prb {

/// Outcome of one built-in oracle suite.
struct SuiteResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

using GradientFn =
    std::function<std::vector<double>(const MLPParams&, std::span<const double>)>;

/// Power iteration against the dense direct solve on random graphs with
/// n <= 64. Measured value: worst infinity-norm gap.
SuiteResult verify_pagerank_oracle(std::size_t instances, std::uint64_t seed);

/// `grad` against central finite differences (step 1e-4) across depths 2-3
/// and widths {4, 16, 100}. Measured value: worst relative error over the
/// coordinates whose step does not cross a relu kink.
SuiteResult verify_gradient(std::size_t instances, std::uint64_t seed,
                            const GradientFn& grad = gradient);

/// PRB with alpha = 0 and EE-Net make the same decisions, round by round.
SuiteResult verify_alpha_zero(std::size_t rounds, std::uint64_t seed);

/// Uniform-random policy on the recommendation protocol, T = 2000. Expected
/// regret is 1800 (10 positives in 100 candidates).
SuiteResult verify_random_band(std::uint64_t seed);

std::vector<SuiteResult> run_verify_suites(const GradientFn& grad = gradient);

/// max |a - b| / max(|a|, |b|, 1e-8) over all entries.
double max_relative_error(std::span<const double> a, std::span<const double> b);

}  // namespace prb
