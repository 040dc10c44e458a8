#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prb/datasets.hpp"
#include "prb/graph.hpp"
#include "prb/pagerank.hpp"
#include "prb/rng.hpp"
#include "prb/round.hpp"

namespace prb {

/// Round generator plus reward oracle. One instance per run; next() and
/// reveal() are the only mutators.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Node count of the evolving graph this environment drives.
  virtual std::size_t num_nodes() const = 0;
  virtual std::size_t context_dim() const = 0;
  virtual std::string name() const = 0;

  virtual RoundSpec next(Rng& rng, const EvolvingGraph& g) = 0;

  /// Reward, regret and optional edge for choosing candidate `chosen`.
  /// Throws IndexError when chosen >= k. The synthetic environment draws its
  /// Bernoulli reward from rng; binary environments ignore it.
  virtual EnvOutcome reveal(const RoundSpec& round, std::size_t chosen,
                            Rng& rng) const = 0;
};

/// Candidate pool of `pool_size` items holding exactly `positives` items the
/// user purchased. Context of item i is normalise([x_user; x_item]).
class RecommendationEnv final : public Environment {
 public:
  RecommendationEnv(std::shared_ptr<const BipartiteDataset> data,
                    std::size_t pool_size = 100, std::size_t positives = 10);

  std::size_t num_nodes() const override { return data_->num_nodes(); }
  std::size_t context_dim() const override { return 2 * data_->features.dim; }
  std::string name() const override { return "recommendation"; }
  RoundSpec next(Rng& rng, const EvolvingGraph& g) override;
  EnvOutcome reveal(const RoundSpec& round, std::size_t chosen,
                    Rng& rng) const override;

 private:
  std::shared_ptr<const BipartiteDataset> data_;
  std::size_t pool_size_;
  std::size_t positives_;
};

/// Candidate pool of `pool_size` nodes holding exactly `positives` of the
/// serving node's ground-truth neighbours. The evolving graph starts empty.
class SocialEnv final : public Environment {
 public:
  SocialEnv(std::shared_ptr<const SocialDataset> data,
            std::size_t pool_size = 100, std::size_t positives = 10);

  std::size_t num_nodes() const override { return data_->num_nodes; }
  std::size_t context_dim() const override { return 2 * data_->features.dim; }
  std::string name() const override { return "social"; }
  RoundSpec next(Rng& rng, const EvolvingGraph& g) override;
  EnvOutcome reveal(const RoundSpec& round, std::size_t chosen,
                    Rng& rng) const override;

 private:
  std::shared_ptr<const SocialDataset> data_;
  std::size_t pool_size_;
  std::size_t positives_;
};

/// k-class node classification recast as linking the serving node to one of
/// k class supernodes (ids n .. n+k-1). Context i carries the serving node's
/// features in block i of a k*d vector.
class NodeClassEnv final : public Environment {
 public:
  NodeClassEnv(std::shared_ptr<const LabeledDataset> data,
               bool reveal_truth = false);

  std::size_t num_nodes() const override {
    return data_->num_nodes + data_->num_classes;
  }
  std::size_t context_dim() const override {
    return data_->num_classes * data_->features.dim;
  }
  std::string name() const override { return "nodeclass"; }
  RoundSpec next(Rng& rng, const EvolvingGraph& g) override;
  EnvOutcome reveal(const RoundSpec& round, std::size_t chosen,
                    Rng& rng) const override;

  NodeId supernode(std::size_t cls) const {
    return static_cast<NodeId>(data_->num_nodes + cls);
  }

 private:
  std::shared_ptr<const LabeledDataset> data_;
  bool reveal_truth_;
};

enum class HiddenFunction { linear, quadratic };

struct SyntheticConfig {
  std::size_t num_nodes = 300;
  std::size_t dim = 20;
  std::size_t k = 20;
  double alpha = 0.85;
  HiddenFunction hidden = HiddenFunction::linear;
};

/// Environment with a known optimum. Candidate contexts are uniform on the
/// unit sphere; y(x) is (<x, theta*> + 1) / 2 or <x, theta*>^2 with theta* a
/// unit vector fixed per run. The expected reward of every node is
/// v* = alpha P v* + (1 - alpha) y, solved exactly on the current graph.
class SyntheticEnv final : public Environment {
 public:
  SyntheticEnv(const SyntheticConfig& cfg, std::uint64_t seed);

  std::size_t num_nodes() const override { return cfg_.num_nodes; }
  std::size_t context_dim() const override { return cfg_.dim; }
  std::string name() const override { return "synthetic"; }
  RoundSpec next(Rng& rng, const EvolvingGraph& g) override;
  EnvOutcome reveal(const RoundSpec& round, std::size_t chosen,
                    Rng& rng) const override;

  double hidden_value(std::span<const double> x) const;
  const std::vector<double>& theta_star() const { return theta_star_; }

 private:
  SyntheticConfig cfg_;
  std::vector<double> theta_star_;
  // Factorisation of I - alpha P, rebuilt whenever the edge count changes.
  std::optional<DenseFixedPointSolver> solver_;
  std::size_t solver_edges_ = 0;
};

/// Regret of a binary environment: 1 - reward.
EnvOutcome reveal_binary(const RoundSpec& round, std::size_t chosen);

}  // namespace prb
