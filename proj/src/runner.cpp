#include "prb/runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "prb/errors.hpp"

namespace prb {

namespace {

constexpr std::array<std::pair<EnvKind, std::string_view>, 4> kEnvNames{{
    {EnvKind::synthetic, "synthetic"},
    {EnvKind::recommendation, "recommendation"},
    {EnvKind::social, "social"},
    {EnvKind::nodeclass, "nodeclass"},
}};

FeatureMatrix features_for(const EnvConfig& cfg, std::size_t rows) {
  if (!cfg.features.empty()) {
    auto f = load_features(cfg.features);
    if (f.rows != rows) {
      throw DimensionError("feature file has " + std::to_string(f.rows) +
                           " rows, graph has " + std::to_string(rows) +
                           " nodes");
    }
    return f;
  }
  return pseudo_random_features(rows, cfg.synthetic.dim, cfg.data_seed);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::string_view to_string(EnvKind kind) {
  for (const auto& [k, name] : kEnvNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<EnvKind> parse_env_kind(std::string_view name) {
  for (const auto& [k, n] : kEnvNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (T < 1) throw ConfigError("run.T must be >= 1");
  if (seeds.empty()) throw ConfigError("run.seeds must list at least one seed");
  policy.validate();
  if (!(env.synthetic.alpha >= 0.0 && env.synthetic.alpha < 1.0)) {
    throw ConfigError("env.alpha must lie in [0, 1)");
  }
}

SharedData prepare_data(const EnvConfig& cfg) {
  SharedData data;
  switch (cfg.kind) {
    case EnvKind::synthetic:
      break;
    case EnvKind::recommendation:
      if (cfg.edges.empty()) {
        data.bipartite = std::make_shared<const BipartiteDataset>(
            generate_bipartite(cfg.num_users, cfg.num_items,
                               cfg.synthetic.dim, cfg.data_seed));
      } else {
        auto edges = load_edge_list(cfg.edges);
        auto features = features_for(cfg, edges.num_nodes);
        data.bipartite = std::make_shared<const BipartiteDataset>(
            make_bipartite(edges, cfg.num_users, std::move(features)));
      }
      break;
    case EnvKind::social:
      if (cfg.edges.empty()) {
        data.social = std::make_shared<const SocialDataset>(
            generate_social(cfg.synthetic.num_nodes, cfg.synthetic.dim,
                            cfg.social_degree, cfg.data_seed));
      } else {
        auto edges = load_edge_list(cfg.edges);
        auto features = features_for(cfg, edges.num_nodes);
        data.social = std::make_shared<const SocialDataset>(
            make_social(edges, std::move(features)));
      }
      break;
    case EnvKind::nodeclass:
      if (cfg.labels.empty()) {
        data.labeled = std::make_shared<const LabeledDataset>(
            generate_labeled(cfg.synthetic.num_nodes, cfg.synthetic.dim,
                             cfg.classes, cfg.data_seed));
      } else {
        if (cfg.features.empty()) {
          throw ConfigError("env.labels requires env.features");
        }
        LabeledDataset ds;
        ds.labels = load_labels(cfg.labels);
        ds.features = load_features(cfg.features);
        ds.num_nodes = ds.labels.size();
        ds.num_classes =
            ds.labels.empty()
                ? 0
                : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
        data.labeled = std::make_shared<const LabeledDataset>(std::move(ds));
      }
      break;
  }
  return data;
}

std::unique_ptr<Environment> make_environment(const EnvConfig& cfg,
                                              const SharedData& data,
                                              std::uint64_t seed) {
  switch (cfg.kind) {
    case EnvKind::synthetic:
      return std::make_unique<SyntheticEnv>(cfg.synthetic, seed);
    case EnvKind::recommendation:
      return std::make_unique<RecommendationEnv>(data.bipartite, cfg.pool_size,
                                                 cfg.positives);
    case EnvKind::social:
      return std::make_unique<SocialEnv>(data.social, cfg.pool_size,
                                         cfg.positives);
    case EnvKind::nodeclass:
      return std::make_unique<NodeClassEnv>(data.labeled,
                                            cfg.nodeclass_reveal_truth);
  }
  throw ConfigError("unknown environment kind");
}

double RegretLog::regret_between(std::size_t from, std::size_t to) const {
  auto cum_at = [&](std::size_t t) {
    return t == 0 ? 0.0 : records.at(t - 1).cum_regret;
  };
  return cum_at(to) - cum_at(from);
}

RegretLog run_one(const ExperimentConfig& cfg, std::uint64_t seed) {
  return run_one(cfg, seed, prepare_data(cfg.env));
}

RegretLog run_one(const ExperimentConfig& cfg, std::uint64_t seed,
                  const SharedData& data) {
  cfg.validate();
  auto env =
      make_environment(cfg.env, data, derive_seed(seed, Stream::env_setup));
  EvolvingGraph graph(env->num_nodes());
  Policy policy(cfg.policy, env->context_dim(), seed);
  Rng env_rng = make_rng(seed, Stream::env);
  Rng reveal_rng = make_rng(seed, Stream::reveal);

  RegretLog log;
  log.seed = seed;
  log.records.reserve(cfg.T);
  double cum = 0.0;
  for (std::size_t t = 1; t <= cfg.T; ++t) {
    try {
      const RoundSpec round = env->next(env_rng, graph);
      const Decision d = policy.decide(round, graph);
      const EnvOutcome out = env->reveal(round, d.chosen_index, reveal_rng);
      if (out.graph_delta) {
        graph.add_edge(out.graph_delta->first, out.graph_delta->second);
      }
      policy.observe(round, d, out.reward, t);
      cum += out.regret;
      log.records.push_back(RoundRecord{t, round.candidates[d.chosen_index],
                                        out.reward, out.regret, cum,
                                        d.pagerank_iterations});
    } catch (const RunError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError("round " + std::to_string(t) + ": " + e.what(), t);
    }
  }
  log.times = policy.times();
  log.final_edges = graph.num_edges();
  return log;
}

Summary summarize(const ExperimentConfig& cfg,
                  const std::vector<RegretLog>& logs) {
  Summary s;
  s.policy = std::string(to_string(cfg.policy.kind));
  s.env = std::string(to_string(cfg.env.kind));
  s.T = cfg.T;
  s.seeds = logs.size();
  s.degenerate = logs.size() < 2;
  if (logs.empty()) return s;

  std::vector<std::pair<std::uint64_t, double>> finals;
  for (const auto& log : logs) finals.emplace_back(log.seed, log.final_regret());
  std::sort(finals.begin(), finals.end());
  double sum = 0.0;
  for (const auto& f : finals) sum += f.second;
  s.mean_final_regret = sum / static_cast<double>(finals.size());
  if (finals.size() > 1) {
    double sq = 0.0;
    for (const auto& f : finals) {
      const double dlt = f.second - s.mean_final_regret;
      sq += dlt * dlt;
    }
    s.std_final_regret = std::sqrt(sq / static_cast<double>(finals.size() - 1));
  }
  return s;
}

ExperimentResult run_all(const ExperimentConfig& cfg) {
  cfg.validate();
  const SharedData data = prepare_data(cfg.env);
  const auto n = static_cast<std::ptrdiff_t>(cfg.seeds.size());
  std::vector<std::optional<RegretLog>> logs(cfg.seeds.size());
  std::vector<std::string> errors(cfg.seeds.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      logs[idx] = run_one(cfg, cfg.seeds[idx], data);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }

  ExperimentResult result;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (logs[i]) {
      result.logs.push_back(std::move(*logs[i]));
    } else {
      result.failures.push_back({cfg.seeds[i], errors[i]});
    }
  }
  std::sort(result.logs.begin(), result.logs.end(),
            [](const auto& a, const auto& b) { return a.seed < b.seed; });
  result.summary = summarize(cfg, result.logs);
  return result;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void write_run_csv(const std::filesystem::path& path, const RegretLog& log) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << kRunCsvHeader << '\n';
  for (const auto& r : log.records) {
    os << r.round << ',' << r.chosen << ',' << r.reward << ','
       << format_real(r.regret) << ',' << format_real(r.cum_regret) << ','
       << r.pr_iters << '\n';
  }
  if (!os) throw Error("failed writing " + path.string());
}

void write_summary_csv(const std::filesystem::path& path, const Summary& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << kSummaryCsvHeader << '\n'
     << s.policy << ',' << s.env << ',' << s.T << ',' << s.seeds << ','
     << format_real(s.mean_final_regret) << ','
     << format_real(s.std_final_regret) << '\n';
  if (!os) throw Error("failed writing " + path.string());
}

std::vector<RoundRecord> read_run_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kRunCsvHeader) {
    throw ParseError(path.string() + ": unexpected run CSV header", 1);
  }
  std::vector<RoundRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    const auto cells = split_csv(line);
    if (cells.size() != 6) {
      throw ParseError(path.string() + ": expected 6 columns", lineno);
    }
    try {
      RoundRecord r;
      r.round = std::stoull(cells[0]);
      r.chosen = static_cast<NodeId>(std::stoul(cells[1]));
      r.reward = std::stoi(cells[2]);
      r.regret = std::stod(cells[3]);
      r.cum_regret = std::stod(cells[4]);
      r.pr_iters = std::stoull(cells[5]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ": bad number", lineno);
    }
  }
  return out;
}

Summary read_summary_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kSummaryCsvHeader) {
    throw ParseError(path.string() + ": unexpected summary CSV header", 1);
  }
  if (!std::getline(is, line)) {
    throw ParseError(path.string() + ": missing summary row", 2);
  }
  const auto cells = split_csv(line);
  if (cells.size() != 6) {
    throw ParseError(path.string() + ": expected 6 columns", 2);
  }
  Summary s;
  try {
    s.policy = cells[0];
    s.env = cells[1];
    s.T = std::stoull(cells[2]);
    s.seeds = std::stoull(cells[3]);
    s.mean_final_regret = std::stod(cells[4]);
    s.std_final_regret = std::stod(cells[5]);
  } catch (const std::logic_error&) {
    throw ParseError(path.string() + ": bad number", 2);
  }
  s.degenerate = s.seeds < 2;
  return s;
}

}  // namespace prb
