#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "prb/graph.hpp"

namespace prb {

struct EdgeList {
  std::size_t num_nodes = 0;  // 1 + largest id seen, or the declared count
  std::vector<std::pair<NodeId, NodeId>> edges;
};

/// Dense row-major feature matrix, every row unit-norm.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
};

/// One "u v" pair per line, 0-indexed, whitespace separated. Blank lines and
/// lines starting with '#' are skipped. When num_nodes is nonzero every id
/// must be below it (RangeError otherwise).
EdgeList load_edge_list(const std::filesystem::path& path,
                        std::size_t num_nodes = 0);

/// First line "n d", then n rows of d reals. Rows are scaled to unit L2 norm;
/// an all-zero row is a NormalizationError.
FeatureMatrix load_features(const std::filesystem::path& path);

/// One integer label per line ('#' comments and blank lines skipped).
std::vector<std::size_t> load_labels(const std::filesystem::path& path);

/// Scales v to unit length in place. Throws NormalizationError on zero input.
void normalize(std::span<double> v);

/// Unit vector drawn uniformly from the sphere.
template <class Rng>
std::vector<double> random_unit_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  double sq = 0.0;
  while (sq == 0.0) {
    sq = 0.0;
    for (double& x : v) {
      x = normal(rng);
      sq += x * x;
    }
  }
  normalize(v);
  return v;
}

/// Deterministic pseudo-random unit-norm features for graphs that ship
/// without them: row i depends only on (seed, i).
FeatureMatrix pseudo_random_features(std::size_t rows, std::size_t dim,
                                     std::uint64_t seed);

/// Users [0, num_users), items [num_users, num_users + num_items).
struct BipartiteDataset {
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::vector<std::vector<NodeId>> purchases;  // per user, item node ids, sorted
  FeatureMatrix features;                      // one row per node
  std::size_t num_nodes() const { return num_users + num_items; }
};

struct SocialDataset {
  std::size_t num_nodes = 0;
  std::vector<std::vector<NodeId>> neighbors;  // ground truth, sorted
  FeatureMatrix features;
};

struct LabeledDataset {
  std::size_t num_nodes = 0;
  std::size_t num_classes = 0;
  std::vector<std::size_t> labels;
  FeatureMatrix features;
};

/// Builds a bipartite dataset from an edge list over the combined id space.
BipartiteDataset make_bipartite(const EdgeList& edges, std::size_t num_users,
                                FeatureMatrix features);
SocialDataset make_social(const EdgeList& edges, FeatureMatrix features);

// Generated stand-ins with latent structure, used when no files are given.
BipartiteDataset generate_bipartite(std::size_t num_users,
                                    std::size_t num_items, std::size_t dim,
                                    std::uint64_t seed);
SocialDataset generate_social(std::size_t num_nodes, std::size_t dim,
                              std::size_t neighbors_per_node,
                              std::uint64_t seed);
LabeledDataset generate_labeled(std::size_t num_nodes, std::size_t dim,
                                std::size_t num_classes, std::uint64_t seed);

}  // namespace prb
