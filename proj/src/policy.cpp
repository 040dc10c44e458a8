#include "prb/policy.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "prb/errors.hpp"

namespace prb {

namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 7> kPolicyNames{{
    {PolicyKind::prb, "prb"},
    {PolicyKind::prb_greedy, "prb-greedy"},
    {PolicyKind::eenet, "eenet"},
    {PolicyKind::neural_greedy, "neural-greedy"},
    {PolicyKind::neural_ucb, "neural-ucb"},
    {PolicyKind::neural_ts, "neural-ts"},
    {PolicyKind::random, "random"},
}};

// Candidate scoring goes parallel only for pools at least this large.
constexpr std::ptrdiff_t kParallelCandidates = 16;

class Stopwatch {
 public:
  explicit Stopwatch(double& sink)
      : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start_)
                 .count();
  }

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string_view to_string(PolicyKind kind) {
  for (const auto& [k, name] : kPolicyNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

void PolicyConfig::validate() const {
  pagerank.validate();
  for (const auto* net : {&f1, &f2}) {
    if (net->width < 1) throw ConfigError("network width must be >= 1");
    if (net->depth < 2) throw ConfigError("network depth must be >= 2");
    if (!(net->learning_rate >= 0.0)) {
      throw ConfigError("learning rate must be >= 0");
    }
  }
  if (training.epochs < 1) throw ConfigError("training epochs must be >= 1");
  if (training.batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(nu >= 0.0)) throw ConfigError("nu must be >= 0");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(grad_scale > 0.0)) throw ConfigError("grad_scale must be > 0");
}

std::vector<std::size_t> network_dims(std::size_t input_dim,
                                      const NetworkConfig& net) {
  std::vector<std::size_t> dims{input_dim};
  for (std::size_t l = 0; l + 1 < net.depth; ++l) dims.push_back(net.width);
  dims.push_back(1);
  return dims;
}

Policy::Policy(const PolicyConfig& cfg, std::size_t context_dim,
               std::uint64_t master_seed)
    : cfg_(cfg),
      seed_(master_seed),
      tie_rng_(make_rng(master_seed, Stream::tie_break)),
      ts_rng_(make_rng(master_seed, Stream::ts_sampling)) {
  cfg_.validate();
  if (context_dim < 1) throw ConfigError("context dimension must be >= 1");
  if (cfg_.kind == PolicyKind::random) return;

  f1_ = init_mlp(network_dims(context_dim, cfg_.f1),
                 derive_seed(master_seed, Stream::f1_init));
  opt1_ = OptimizerState::gradient_descent(cfg_.f1.learning_rate);
  buf1_ = TrainBuffer(context_dim);
  if (has_f2()) {
    f2_ = init_mlp(network_dims(f1_.num_params(), cfg_.f2),
                   derive_seed(master_seed, Stream::f2_init));
    opt2_ = OptimizerState::adam(cfg_.f2.learning_rate, f2_.num_params());
    buf2_ = TrainBuffer(f1_.num_params());
  }
  if (uses_confidence()) z_diag_.assign(f1_.num_params(), cfg_.lambda);
}

bool Policy::has_f2() const noexcept {
  return cfg_.kind == PolicyKind::prb || cfg_.kind == PolicyKind::eenet;
}

bool Policy::uses_pagerank() const noexcept {
  return cfg_.kind == PolicyKind::prb || cfg_.kind == PolicyKind::prb_greedy;
}

bool Policy::uses_confidence() const noexcept {
  return cfg_.kind == PolicyKind::neural_ucb ||
         cfg_.kind == PolicyKind::neural_ts;
}

std::vector<double> Policy::score_exploit_explore(
    const RoundSpec& round) const {
  const auto k = static_cast<std::ptrdiff_t>(round.num_candidates());
  std::vector<double> scores(round.num_candidates(), 0.0);
  if (cfg_.kind == PolicyKind::random) return scores;
  for (const auto& x : round.contexts) {
    if (x.size() != f1_.input_dim()) {
      throw DimensionError("context length " + std::to_string(x.size()) +
                           " != f1 input " + std::to_string(f1_.input_dim()));
    }
  }
  const bool explore = has_f2();
#pragma omp parallel for schedule(static) if (k >= kParallelCandidates)
  for (std::ptrdiff_t i = 0; i < k; ++i) {
    const auto& x = round.contexts[static_cast<std::size_t>(i)];
    double s = forward(f1_, x);
    if (explore) s += forward(f2_, gradient(f1_, x));
    scores[static_cast<std::size_t>(i)] = s;
  }
  return scores;
}

std::size_t Policy::argmax(const std::vector<double>& scores) {
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] == best) tied.push_back(i);
  }
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(tie_rng_)];
}

double Policy::confidence_width(std::span<const double> grad) const {
  double acc = 0.0;
  const double s2 = cfg_.grad_scale * cfg_.grad_scale;
  for (std::size_t j = 0; j < grad.size(); ++j) {
    acc += s2 * grad[j] * grad[j] / z_diag_[j];
  }
  return std::sqrt(acc);
}

Decision Policy::decide(const RoundSpec& round, const EvolvingGraph& g) {
  if (round.num_candidates() == 0) {
    throw ConfigError("round has no candidates");
  }
  return uses_pagerank() ? prb_decide(round, g) : baseline_decide(round);
}

Decision Policy::prb_decide(const RoundSpec& round, const EvolvingGraph& g) {
  if (!uses_pagerank()) {
    throw ConfigError(std::string(to_string(cfg_.kind)) +
                      " does not use PageRank");
  }
  Decision d;
  {
    Stopwatch sw(times_.scoring);
    d.h_snapshot = score_exploit_explore(round);
  }
  {
    Stopwatch sw(times_.solve);
    ScoreVector h(g.num_nodes(), 0.0);
    for (std::size_t i = 0; i < round.num_candidates(); ++i) {
      const NodeId c = round.candidates[i];
      if (c >= g.num_nodes()) {
        throw IndexError("candidate node " + std::to_string(c) +
                         " not in graph");
      }
      h[c] = d.h_snapshot[i];
    }
    auto result = solve(g, h, cfg_.pagerank,
                        warm_.size() == g.num_nodes()
                            ? std::span<const double>(warm_)
                            : std::span<const double>());
    d.pagerank_iterations = result.iterations;
    warm_ = std::move(result.values);
  }
  d.scores.reserve(round.num_candidates());
  for (NodeId c : round.candidates) d.scores.push_back(warm_[c]);
  d.chosen_index = argmax(d.scores);
  return d;
}

Decision Policy::baseline_decide(const RoundSpec& round) {
  if (uses_pagerank()) {
    throw ConfigError(std::string(to_string(cfg_.kind)) +
                      " needs the graph; use prb_decide");
  }
  Stopwatch sw(times_.scoring);
  Decision d;
  d.h_snapshot = score_exploit_explore(round);
  d.scores = d.h_snapshot;
  if (uses_confidence()) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < round.num_candidates(); ++i) {
      const double width =
          cfg_.nu * confidence_width(gradient(f1_, round.contexts[i]));
      if (cfg_.kind == PolicyKind::neural_ucb) {
        d.scores[i] += width;
      } else {
        d.scores[i] += width * normal(ts_rng_);
      }
    }
  }
  d.chosen_index = argmax(d.scores);
  return d;
}

bool Policy::observe(const RoundSpec& round, const Decision& d, int reward,
                     std::size_t t) {
  if (reward != 0 && reward != 1) {
    throw ConfigError("reward must be 0 or 1, got " + std::to_string(reward));
  }
  if (d.chosen_index >= round.num_candidates()) {
    throw IndexError("decision index out of range");
  }
  if (cfg_.kind == PolicyKind::random) return false;

  const auto& x = round.contexts[d.chosen_index];
  buf1_.add(x, reward);
  if (has_f2() || uses_confidence()) {
    // f1 has not changed since decide(), so this is the decision-time gradient.
    const auto phi = gradient(f1_, x);
    if (has_f2()) buf2_.add(phi, reward - forward(f1_, x));
    if (uses_confidence()) {
      const double s2 = cfg_.grad_scale * cfg_.grad_scale;
      for (std::size_t j = 0; j < phi.size(); ++j) {
        z_diag_[j] += s2 * phi[j] * phi[j];
      }
    }
  }

  if (!cfg_.schedule.is_checkpoint(t)) return false;
  Stopwatch sw(times_.training);
  const auto train_seed = derive_seed(seed_, Stream::training);
  train(f1_, opt1_, buf1_, cfg_.training,
        derive_seed(train_seed, 2 * checkpoints_));
  if (has_f2()) {
    train(f2_, opt2_, buf2_, cfg_.training,
          derive_seed(train_seed, 2 * checkpoints_ + 1));
  }
  ++checkpoints_;
  return true;
}

}  // namespace prb
