#include "prb/environment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "prb/errors.hpp"

namespace prb {

namespace {

std::vector<double> pair_context(std::span<const double> a,
                                 std::span<const double> b) {
  std::vector<double> x;
  x.reserve(a.size() + b.size());
  x.insert(x.end(), a.begin(), a.end());
  x.insert(x.end(), b.begin(), b.end());
  normalize(x);
  return x;
}

void check_chosen(const RoundSpec& round, std::size_t chosen) {
  if (chosen >= round.num_candidates()) {
    throw IndexError("chosen index " + std::to_string(chosen) +
                     " out of range for " +
                     std::to_string(round.num_candidates()) + " candidates");
  }
}

// Draws `count` distinct elements of `pool` (without replacement).
template <class T>
std::vector<T> sample_distinct(const std::vector<T>& pool, std::size_t count,
                               Rng& rng) {
  std::vector<T> copy = pool;
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, copy.size() - 1);
    std::swap(copy[i], copy[pick(rng)]);
  }
  copy.resize(count);
  return copy;
}

// Builds the shuffled candidate list from positives and negatives and
// records which positions hold positives.
void assemble(RoundSpec& round, const std::vector<NodeId>& positives,
              const std::vector<NodeId>& negatives, Rng& rng) {
  std::vector<std::pair<NodeId, bool>> pool;
  pool.reserve(positives.size() + negatives.size());
  for (NodeId p : positives) pool.emplace_back(p, true);
  for (NodeId q : negatives) pool.emplace_back(q, false);
  std::shuffle(pool.begin(), pool.end(), rng);
  round.candidates.clear();
  round.positives.clear();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    round.candidates.push_back(pool[i].first);
    if (pool[i].second) round.positives.push_back(i);
  }
}

// Rejection-samples `count` ids uniformly from [lo, hi) that are not in
// `excluded` (sorted) and not equal to `serving`.
std::vector<NodeId> sample_excluding(NodeId lo, NodeId hi, std::size_t count,
                                     const std::vector<NodeId>& excluded,
                                     NodeId serving, Rng& rng) {
  std::uniform_int_distribution<NodeId> pick(lo, hi - 1);
  std::vector<NodeId> out;
  out.reserve(count);
  while (out.size() < count) {
    const NodeId c = pick(rng);
    if (c == serving) continue;
    if (std::binary_search(excluded.begin(), excluded.end(), c)) continue;
    if (std::find(out.begin(), out.end(), c) != out.end()) continue;
    out.push_back(c);
  }
  return out;
}

}  // namespace

EnvOutcome reveal_binary(const RoundSpec& round, std::size_t chosen) {
  check_chosen(round, chosen);
  EnvOutcome out;
  const bool hit = std::find(round.positives.begin(), round.positives.end(),
                             chosen) != round.positives.end();
  out.reward = hit ? 1 : 0;
  out.regret = 1.0 - out.reward;
  if (hit) out.graph_delta.emplace(round.serving, round.candidates[chosen]);
  return out;
}

// --- recommendation -------------------------------------------------------

RecommendationEnv::RecommendationEnv(
    std::shared_ptr<const BipartiteDataset> data, std::size_t pool_size,
    std::size_t positives)
    : data_(std::move(data)), pool_size_(pool_size), positives_(positives) {
  if (positives_ == 0 || pool_size_ <= positives_) {
    throw ConfigError("recommendation pool must exceed the positive count");
  }
  bool any = false;
  for (const auto& p : data_->purchases) {
    if (p.size() >= positives_) {
      any = true;
      if (data_->num_items - p.size() < pool_size_ - positives_) {
        throw ConfigError("not enough non-purchased items to fill a pool");
      }
    }
  }
  if (!any) {
    throw ConfigError("no user has at least " + std::to_string(positives_) +
                      " purchases");
  }
}

RoundSpec RecommendationEnv::next(Rng& rng, const EvolvingGraph&) {
  std::uniform_int_distribution<std::size_t> user(0, data_->num_users - 1);
  std::size_t u = user(rng);
  // Users with too few purchases are rejected and redrawn.
  while (data_->purchases[u].size() < positives_) u = user(rng);
  const auto& bought = data_->purchases[u];

  RoundSpec round;
  round.serving = static_cast<NodeId>(u);
  const auto pos = sample_distinct(bought, positives_, rng);
  const auto first_item = static_cast<NodeId>(data_->num_users);
  const auto end_item = static_cast<NodeId>(data_->num_nodes());
  const auto neg = sample_excluding(first_item, end_item,
                                    pool_size_ - positives_, bought,
                                    round.serving, rng);
  assemble(round, pos, neg, rng);
  const auto xu = data_->features.row(u);
  for (NodeId c : round.candidates) {
    round.contexts.push_back(pair_context(xu, data_->features.row(c)));
  }
  return round;
}

EnvOutcome RecommendationEnv::reveal(const RoundSpec& round, std::size_t chosen,
                                     Rng&) const {
  return reveal_binary(round, chosen);
}

// --- social -----------------------------------------------------------------

SocialEnv::SocialEnv(std::shared_ptr<const SocialDataset> data,
                     std::size_t pool_size, std::size_t positives)
    : data_(std::move(data)), pool_size_(pool_size), positives_(positives) {
  if (positives_ == 0 || pool_size_ <= positives_) {
    throw ConfigError("social pool must exceed the positive count");
  }
  bool any = false;
  for (const auto& nb : data_->neighbors) {
    if (nb.size() >= positives_) {
      any = true;
      if (data_->num_nodes - 1 - nb.size() < pool_size_ - positives_) {
        throw ConfigError("not enough non-neighbours to fill a pool");
      }
    }
  }
  if (!any) {
    throw ConfigError("no node has at least " + std::to_string(positives_) +
                      " neighbours");
  }
}

RoundSpec SocialEnv::next(Rng& rng, const EvolvingGraph&) {
  std::uniform_int_distribution<std::size_t> node(0, data_->num_nodes - 1);
  std::size_t v = node(rng);
  while (data_->neighbors[v].size() < positives_) v = node(rng);
  const auto& truth = data_->neighbors[v];

  RoundSpec round;
  round.serving = static_cast<NodeId>(v);
  const auto pos = sample_distinct(truth, positives_, rng);
  const auto neg =
      sample_excluding(0, static_cast<NodeId>(data_->num_nodes),
                       pool_size_ - positives_, truth, round.serving, rng);
  assemble(round, pos, neg, rng);
  const auto xv = data_->features.row(v);
  for (NodeId c : round.candidates) {
    round.contexts.push_back(pair_context(xv, data_->features.row(c)));
  }
  return round;
}

EnvOutcome SocialEnv::reveal(const RoundSpec& round, std::size_t chosen,
                             Rng&) const {
  return reveal_binary(round, chosen);
}

// --- node classification ---------------------------------------------------

NodeClassEnv::NodeClassEnv(std::shared_ptr<const LabeledDataset> data,
                           bool reveal_truth)
    : data_(std::move(data)), reveal_truth_(reveal_truth) {
  if (data_->labels.size() != data_->num_nodes ||
      data_->features.rows != data_->num_nodes) {
    throw DimensionError("labels/features do not cover every node");
  }
  for (std::size_t y : data_->labels) {
    if (y >= data_->num_classes) {
      throw RangeError("label " + std::to_string(y) + " >= class count " +
                       std::to_string(data_->num_classes));
    }
  }
}

RoundSpec NodeClassEnv::next(Rng& rng, const EvolvingGraph&) {
  std::uniform_int_distribution<std::size_t> node(0, data_->num_nodes - 1);
  const std::size_t v = node(rng);
  const std::size_t k = data_->num_classes;
  const std::size_t d = data_->features.dim;
  const auto xv = data_->features.row(v);

  RoundSpec round;
  round.serving = static_cast<NodeId>(v);
  for (std::size_t i = 0; i < k; ++i) {
    round.candidates.push_back(supernode(i));
    std::vector<double> x(k * d, 0.0);
    std::copy(xv.begin(), xv.end(), x.begin() + static_cast<std::ptrdiff_t>(i * d));
    normalize(x);
    round.contexts.push_back(std::move(x));
  }
  round.positives.push_back(data_->labels[v]);
  return round;
}

EnvOutcome NodeClassEnv::reveal(const RoundSpec& round, std::size_t chosen,
                                Rng&) const {
  EnvOutcome out = reveal_binary(round, chosen);
  if (out.reward == 0 && reveal_truth_) {
    out.graph_delta.emplace(round.serving,
                            round.candidates[round.positives.front()]);
  }
  return out;
}

// --- synthetic ---------------------------------------------------------------

SyntheticEnv::SyntheticEnv(const SyntheticConfig& cfg, std::uint64_t seed)
    : cfg_(cfg) {
  if (!(cfg_.alpha >= 0.0 && cfg_.alpha < 1.0)) {
    throw ConfigError("synthetic alpha must lie in [0, 1)");
  }
  if (cfg_.num_nodes > kDenseOracleLimit) {
    throw ConfigError("synthetic environment needs n <= " +
                      std::to_string(kDenseOracleLimit) +
                      " for its exact oracle, got " +
                      std::to_string(cfg_.num_nodes));
  }
  if (cfg_.k < 1 || cfg_.k + 1 > cfg_.num_nodes) {
    throw ConfigError("synthetic k must satisfy 1 <= k < n");
  }
  if (cfg_.dim < 1) throw ConfigError("synthetic dim must be >= 1");
  Rng rng(seed);
  theta_star_ = random_unit_vector(cfg_.dim, rng);
}

double SyntheticEnv::hidden_value(std::span<const double> x) const {
  double ip = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ip += x[i] * theta_star_[i];
  if (cfg_.hidden == HiddenFunction::linear) return (ip + 1.0) / 2.0;
  return ip * ip;
}

RoundSpec SyntheticEnv::next(Rng& rng, const EvolvingGraph& g) {
  if (g.num_nodes() != cfg_.num_nodes) {
    throw DimensionError("synthetic environment expects a graph with " +
                         std::to_string(cfg_.num_nodes) + " nodes");
  }
  std::uniform_int_distribution<NodeId> node(
      0, static_cast<NodeId>(cfg_.num_nodes - 1));
  RoundSpec round;
  round.serving = node(rng);
  round.candidates = sample_excluding(
      0, static_cast<NodeId>(cfg_.num_nodes), cfg_.k, {}, round.serving, rng);
  std::vector<double> y(cfg_.num_nodes, 0.0);
  for (NodeId c : round.candidates) {
    round.contexts.push_back(random_unit_vector(cfg_.dim, rng));
    y[c] = hidden_value(round.contexts.back());
  }
  if (!solver_ || solver_edges_ != g.num_edges()) {
    solver_.emplace(g, cfg_.alpha);
    solver_edges_ = g.num_edges();
  }
  const auto v_star = solver_->solve(y);
  for (NodeId c : round.candidates) round.oracle_values.push_back(v_star[c]);
  return round;
}

EnvOutcome SyntheticEnv::reveal(const RoundSpec& round, std::size_t chosen,
                                Rng& rng) const {
  check_chosen(round, chosen);
  const auto& v = round.oracle_values;
  const double best = *std::max_element(v.begin(), v.end());
  const double p = std::clamp(v[chosen], 0.0, 1.0);
  std::bernoulli_distribution coin(p);
  EnvOutcome out;
  out.reward = coin(rng) ? 1 : 0;
  out.regret = best - v[chosen];
  if (out.reward == 1) {
    out.graph_delta.emplace(round.serving, round.candidates[chosen]);
  }
  return out;
}

}  // namespace prb
