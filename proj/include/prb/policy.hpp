#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prb/graph.hpp"
#include "prb/mlp.hpp"
#include "prb/pagerank.hpp"
#include "prb/rng.hpp"
#include "prb/round.hpp"

namespace prb {

enum class PolicyKind {
  prb,            // f1 + f2 scores propagated by PageRank
  prb_greedy,     // f1 scores propagated by PageRank
  eenet,          // argmax f1 + f2
  neural_greedy,  // argmax f1
  neural_ucb,     // f1 + nu * diagonal confidence width
  neural_ts,      // sample ~ N(f1, nu^2 * diagonal variance)
  random,         // uniform over candidates
};

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

/// Training checkpoints: every `early_every` rounds while t < switch_round,
/// every `late_every` rounds afterwards (t is 1-based).
struct Schedule {
  std::size_t early_every = 50;
  std::size_t switch_round = 2000;
  std::size_t late_every = 100;

  bool is_checkpoint(std::size_t t) const {
    const std::size_t every = t < switch_round ? early_every : late_every;
    return every != 0 && t % every == 0;
  }
};

struct NetworkConfig {
  std::size_t width = 100;
  std::size_t depth = 2;  // number of weight layers
  double learning_rate = 1e-3;
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::prb;
  PageRankConfig pagerank;  // alpha is the PRB damping factor
  NetworkConfig f1;         // trained with plain gradient descent
  NetworkConfig f2;         // trained with Adam
  TrainOptions training;
  Schedule schedule;
  double nu = 0.01;          // exploration scale (UCB/TS)
  double lambda = 1.0;       // initial value of z_diag (UCB/TS)
  double grad_scale = 1.0;   // gradients are multiplied by this before use in z_diag

  void validate() const;
};

/// Layer dims [d, width, ..., width, 1] for `depth` weight layers.
std::vector<std::size_t> network_dims(std::size_t input_dim,
                                      const NetworkConfig& net);

struct Decision {
  std::size_t chosen_index = 0;
  std::vector<double> scores;      // final decision value per candidate
  std::vector<double> h_snapshot;  // exploitation(+exploration) score per candidate
  std::size_t pagerank_iterations = 0;
};

struct PhaseTimes {
  double scoring = 0.0;
  double solve = 0.0;
  double training = 0.0;
};

/// State of one learner for one run.
class Policy {
 public:
  Policy(const PolicyConfig& cfg, std::size_t context_dim,
         std::uint64_t master_seed);

  PolicyKind kind() const noexcept { return cfg_.kind; }
  const PolicyConfig& config() const noexcept { return cfg_; }

  bool has_f2() const noexcept;
  bool uses_pagerank() const noexcept;
  bool uses_confidence() const noexcept;

  /// f1(x_i) + f2(phi(x_i)) for policies owning f2, else f1(x_i).
  std::vector<double> score_exploit_explore(const RoundSpec& round) const;

  Decision decide(const RoundSpec& round, const EvolvingGraph& g);
  Decision prb_decide(const RoundSpec& round, const EvolvingGraph& g);
  Decision baseline_decide(const RoundSpec& round);

  /// Logs the chosen sample and trains at schedule checkpoints. `t` is the
  /// 1-based round index. Returns true when training ran.
  bool observe(const RoundSpec& round, const Decision& d, int reward,
               std::size_t t);

  const MLPParams& f1() const noexcept { return f1_; }
  const MLPParams& f2() const noexcept { return f2_; }
  MLPParams& f1() noexcept { return f1_; }
  MLPParams& f2() noexcept { return f2_; }
  const TrainBuffer& f1_buffer() const noexcept { return buf1_; }
  const TrainBuffer& f2_buffer() const noexcept { return buf2_; }
  const std::vector<double>& z_diag() const noexcept { return z_diag_; }
  const PhaseTimes& times() const noexcept { return times_; }
  const ScoreVector& last_pagerank() const noexcept { return warm_; }

 private:
  std::size_t argmax(const std::vector<double>& scores);
  double confidence_width(std::span<const double> grad) const;

  PolicyConfig cfg_;
  std::uint64_t seed_;
  MLPParams f1_;
  MLPParams f2_;
  OptimizerState opt1_;
  OptimizerState opt2_;
  TrainBuffer buf1_;
  TrainBuffer buf2_;
  std::vector<double> z_diag_;
  ScoreVector warm_;
  Rng tie_rng_;
  Rng ts_rng_;
  std::size_t checkpoints_ = 0;
  PhaseTimes times_;
};

}  // namespace prb
