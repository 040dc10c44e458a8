#include "prb/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "prb/errors.hpp"
#include "prb/rng.hpp"

namespace prb {

namespace {

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  return is;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

void normalize(std::span<double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (!(sq > 0.0) || !std::isfinite(sq)) {
    throw NormalizationError("cannot normalise a zero or non-finite vector");
  }
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
}

EdgeList load_edge_list(const std::filesystem::path& path,
                        std::size_t num_nodes) {
  auto is = open_or_throw(path);
  EdgeList out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t max_id = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(ss >> u >> v) || (ss >> extra) || u < 0 || v < 0) {
      throw ParseError(where(path, lineno) + "expected \"u v\" with "
                       "non-negative integer ids, got \"" + line + "\"",
                       lineno);
    }
    if (num_nodes != 0 && (static_cast<std::size_t>(u) >= num_nodes ||
                           static_cast<std::size_t>(v) >= num_nodes)) {
      throw RangeError(where(path, lineno) + "node id out of range for " +
                       std::to_string(num_nodes) + " nodes");
    }
    max_id = std::max({max_id, static_cast<std::size_t>(u),
                       static_cast<std::size_t>(v)});
    out.edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  out.num_nodes = num_nodes != 0 ? num_nodes
                                 : (out.edges.empty() ? 0 : max_id + 1);
  return out;
}

FeatureMatrix load_features(const std::filesystem::path& path) {
  auto is = open_or_throw(path);
  std::string line;
  std::size_t lineno = 0;
  FeatureMatrix m;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string extra;
    if (!have_header) {
      long long n = 0, d = 0;
      if (!(ss >> n >> d) || (ss >> extra) || n <= 0 || d <= 0) {
        throw ParseError(where(path, lineno) + "expected header \"n d\"",
                         lineno);
      }
      m.rows = static_cast<std::size_t>(n);
      m.dim = static_cast<std::size_t>(d);
      m.values.reserve(m.rows * m.dim);
      have_header = true;
      continue;
    }
    if (row == m.rows) {
      throw ParseError(where(path, lineno) + "more than " +
                       std::to_string(m.rows) + " feature rows", lineno);
    }
    const std::size_t start = m.values.size();
    for (std::size_t c = 0; c < m.dim; ++c) {
      double x = 0.0;
      if (!(ss >> x)) {
        throw ParseError(where(path, lineno) + "expected " +
                         std::to_string(m.dim) + " reals", lineno);
      }
      m.values.push_back(x);
    }
    if (ss >> extra) {
      throw ParseError(where(path, lineno) + "too many values on row", lineno);
    }
    try {
      normalize(std::span<double>(m.values).subspan(start, m.dim));
    } catch (const NormalizationError&) {
      throw NormalizationError(where(path, lineno) +
                               "feature row is all zeros");
    }
    ++row;
  }
  if (!have_header) throw ParseError(path.string() + ": empty feature file", 0);
  if (row != m.rows) {
    throw ParseError(path.string() + ": expected " + std::to_string(m.rows) +
                     " rows, found " + std::to_string(row), lineno);
  }
  return m;
}

std::vector<std::size_t> load_labels(const std::filesystem::path& path) {
  auto is = open_or_throw(path);
  std::vector<std::size_t> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    long long y = -1;
    std::string extra;
    if (!(ss >> y) || (ss >> extra) || y < 0) {
      throw ParseError(where(path, lineno) + "expected a non-negative label",
                       lineno);
    }
    labels.push_back(static_cast<std::size_t>(y));
  }
  return labels;
}

FeatureMatrix pseudo_random_features(std::size_t rows, std::size_t dim,
                                     std::uint64_t seed) {
  FeatureMatrix m;
  m.rows = rows;
  m.dim = dim;
  m.values.reserve(rows * dim);
  for (std::size_t i = 0; i < rows; ++i) {
    Rng rng(derive_seed(seed, 0x1000 + static_cast<std::uint64_t>(i)));
    const auto v = random_unit_vector(dim, rng);
    m.values.insert(m.values.end(), v.begin(), v.end());
  }
  return m;
}

BipartiteDataset make_bipartite(const EdgeList& edges, std::size_t num_users,
                                FeatureMatrix features) {
  if (num_users == 0 || edges.num_nodes <= num_users) {
    throw ConfigError("bipartite dataset needs 0 < num_users < num_nodes");
  }
  if (features.rows != edges.num_nodes) {
    throw DimensionError("feature rows " + std::to_string(features.rows) +
                         " != node count " + std::to_string(edges.num_nodes));
  }
  BipartiteDataset ds;
  ds.num_users = num_users;
  ds.num_items = edges.num_nodes - num_users;
  ds.purchases.resize(num_users);
  for (auto [u, v] : edges.edges) {
    if (u >= num_users && v < num_users) std::swap(u, v);
    if (!(u < num_users && v >= num_users)) {
      throw RangeError("purchase edge (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") does not join a user to an item");
    }
    ds.purchases[u].push_back(v);
  }
  for (auto& p : ds.purchases) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  ds.features = std::move(features);
  return ds;
}

SocialDataset make_social(const EdgeList& edges, FeatureMatrix features) {
  if (features.rows != edges.num_nodes) {
    throw DimensionError("feature rows " + std::to_string(features.rows) +
                         " != node count " + std::to_string(edges.num_nodes));
  }
  SocialDataset ds;
  ds.num_nodes = edges.num_nodes;
  ds.neighbors.resize(ds.num_nodes);
  for (auto [u, v] : edges.edges) {
    if (u == v) continue;
    ds.neighbors[u].push_back(v);
    ds.neighbors[v].push_back(u);
  }
  for (auto& nb : ds.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  ds.features = std::move(features);
  return ds;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

BipartiteDataset generate_bipartite(std::size_t num_users,
                                    std::size_t num_items, std::size_t dim,
                                    std::uint64_t seed) {
  if (num_items < 40) throw ConfigError("generated dataset needs >= 40 items");
  BipartiteDataset ds;
  ds.num_users = num_users;
  ds.num_items = num_items;
  ds.features = pseudo_random_features(num_users + num_items, dim, seed);
  ds.purchases.resize(num_users);
  Rng rng(derive_seed(seed, 0xb1ULL));
  std::uniform_int_distribution<std::size_t> count(10, 30);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<std::pair<double, NodeId>> scored(num_items);
  for (std::size_t u = 0; u < num_users; ++u) {
    for (std::size_t j = 0; j < num_items; ++j) {
      const auto item = static_cast<NodeId>(num_users + j);
      scored[j] = {dot(ds.features.row(u), ds.features.row(item)) + noise(rng),
                   item};
    }
    const std::size_t c = count(rng);
    std::partial_sort(scored.begin(), scored.begin() + c, scored.end(),
                      [](const auto& a, const auto& b) { return a > b; });
    auto& p = ds.purchases[u];
    for (std::size_t j = 0; j < c; ++j) p.push_back(scored[j].second);
    std::sort(p.begin(), p.end());
  }
  return ds;
}

SocialDataset generate_social(std::size_t num_nodes, std::size_t dim,
                              std::size_t neighbors_per_node,
                              std::uint64_t seed) {
  if (num_nodes <= neighbors_per_node + 90) {
    throw ConfigError("generated social graph too small for 100-node pools");
  }
  SocialDataset ds;
  ds.num_nodes = num_nodes;
  ds.features = pseudo_random_features(num_nodes, dim, seed);
  ds.neighbors.resize(num_nodes);
  std::vector<std::pair<double, NodeId>> scored;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    scored.clear();
    for (std::size_t u = 0; u < num_nodes; ++u) {
      if (u == v) continue;
      scored.emplace_back(dot(ds.features.row(v), ds.features.row(u)),
                          static_cast<NodeId>(u));
    }
    std::partial_sort(scored.begin(), scored.begin() + neighbors_per_node,
                      scored.end(),
                      [](const auto& a, const auto& b) { return a > b; });
    for (std::size_t j = 0; j < neighbors_per_node; ++j) {
      const NodeId u = scored[j].second;
      ds.neighbors[v].push_back(u);
      ds.neighbors[u].push_back(static_cast<NodeId>(v));
    }
  }
  for (auto& nb : ds.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return ds;
}

LabeledDataset generate_labeled(std::size_t num_nodes, std::size_t dim,
                                std::size_t num_classes, std::uint64_t seed) {
  if (num_classes < 2) throw ConfigError("need at least two classes");
  LabeledDataset ds;
  ds.num_nodes = num_nodes;
  ds.num_classes = num_classes;
  Rng rng(derive_seed(seed, 0x1abULL));
  std::vector<std::vector<double>> centroids;
  for (std::size_t c = 0; c < num_classes; ++c) {
    centroids.push_back(random_unit_vector(dim, rng));
  }
  std::uniform_int_distribution<std::size_t> pick(0, num_classes - 1);
  std::normal_distribution<double> noise(0.0, 0.5 / std::sqrt(double(dim)));
  ds.features.rows = num_nodes;
  ds.features.dim = dim;
  ds.features.values.reserve(num_nodes * dim);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    const std::size_t y = pick(rng);
    ds.labels.push_back(y);
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = centroids[y][j] + noise(rng);
    normalize(x);
    ds.features.values.insert(ds.features.values.end(), x.begin(), x.end());
  }
  return ds;
}

}  // namespace prb
