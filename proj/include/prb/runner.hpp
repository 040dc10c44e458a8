#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prb/datasets.hpp"
#include "prb/environment.hpp"
#include "prb/policy.hpp"

namespace prb {

enum class EnvKind { synthetic, recommendation, social, nodeclass };

std::string_view to_string(EnvKind kind);
std::optional<EnvKind> parse_env_kind(std::string_view name);

struct EnvConfig {
  EnvKind kind = EnvKind::synthetic;
  SyntheticConfig synthetic;        // n, d, k, alpha, hidden function
  std::filesystem::path edges;      // recommendation/social edge list
  std::filesystem::path features;   // optional feature file
  std::filesystem::path labels;     // node classification labels
  std::size_t num_users = 200;      // recommendation: ids below are users
  std::size_t num_items = 1000;     // generated recommendation data only
  std::size_t pool_size = 100;      // recommendation/social candidates
  std::size_t positives = 10;
  std::size_t social_degree = 12;   // generated social data only
  std::size_t classes = 3;          // generated node-classification data only
  bool nodeclass_reveal_truth = false;
  std::uint64_t data_seed = 0;      // generated datasets and stand-in features
};

struct ExperimentConfig {
  EnvConfig env;
  PolicyConfig policy;
  std::size_t T = 2000;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::filesystem::path output_dir = "results";

  void validate() const;
};

/// Datasets are loaded or generated once per experiment and shared read-only
/// by every seed.
struct SharedData {
  std::shared_ptr<const BipartiteDataset> bipartite;
  std::shared_ptr<const SocialDataset> social;
  std::shared_ptr<const LabeledDataset> labeled;
};

SharedData prepare_data(const EnvConfig& cfg);

std::unique_ptr<Environment> make_environment(const EnvConfig& cfg,
                                              const SharedData& data,
                                              std::uint64_t seed);

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  NodeId chosen = 0;      // node id of the selected candidate
  int reward = 0;
  double regret = 0.0;
  double cum_regret = 0.0;
  std::size_t pr_iters = 0;

  bool operator==(const RoundRecord&) const = default;
};

struct RegretLog {
  std::uint64_t seed = 0;
  std::vector<RoundRecord> records;
  PhaseTimes times;
  std::size_t final_edges = 0;

  double final_regret() const {
    return records.empty() ? 0.0 : records.back().cum_regret;
  }
  /// Regret accumulated in rounds (from, to], 0 <= from <= to <= T.
  double regret_between(std::size_t from, std::size_t to) const;
};

/// Runs exactly cfg.T rounds for one seed. Errors are rethrown as RunError
/// carrying the round index.
RegretLog run_one(const ExperimentConfig& cfg, std::uint64_t seed);
RegretLog run_one(const ExperimentConfig& cfg, std::uint64_t seed,
                  const SharedData& data);

struct Summary {
  std::string policy;
  std::string env;
  std::size_t T = 0;
  std::size_t seeds = 0;  // successful runs aggregated
  double mean_final_regret = 0.0;
  double std_final_regret = 0.0;  // sample std (n - 1); 0 for one run
  bool degenerate = false;        // fewer than two runs
};

/// Mean and sample standard deviation of the final regrets, folded in seed
/// order so the result does not depend on the order of `logs`.
Summary summarize(const ExperimentConfig& cfg,
                  const std::vector<RegretLog>& logs);

struct SeedFailure {
  std::uint64_t seed;
  std::string message;
};

struct ExperimentResult {
  std::vector<RegretLog> logs;  // successful runs, in seed order
  std::vector<SeedFailure> failures;
  Summary summary;
};

/// One independent run per seed (in parallel when OpenMP has threads).
ExperimentResult run_all(const ExperimentConfig& cfg);

// CSV files. Reals are written with 9 significant digits.
inline constexpr std::string_view kRunCsvHeader =
    "round,chosen,reward,regret,cum_regret,pr_iters";
inline constexpr std::string_view kSummaryCsvHeader =
    "policy,env,T,seeds,mean_final_regret,std_final_regret";

void write_run_csv(const std::filesystem::path& path, const RegretLog& log);
void write_summary_csv(const std::filesystem::path& path, const Summary& s);
std::vector<RoundRecord> read_run_csv(const std::filesystem::path& path);
Summary read_summary_csv(const std::filesystem::path& path);

std::string format_real(double x);

}  // namespace prb
