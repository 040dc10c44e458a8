#include "prb/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "prb/errors.hpp"

namespace prb {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value,
                      std::string_view allowed) {
  throw ConfigError("config key '" + std::string(key) + "': invalid value '" +
                    std::string(value) + "' (allowed: " + std::string(allowed) +
                    ")");
}

std::uint64_t to_uint(std::string_view key, std::string_view value,
                      std::uint64_t lo,
                      std::uint64_t hi = std::numeric_limits<std::uint64_t>::max()) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  const std::string range = "integer in [" + std::to_string(lo) + ", " +
                            (hi == std::numeric_limits<std::uint64_t>::max()
                                 ? std::string("inf")
                                 : std::to_string(hi)) +
                            "]";
  if (ec != std::errc() || ptr != end || out < lo || out > hi) {
    bad(key, value, range);
  }
  return out;
}

double to_real(std::string_view key, std::string_view value, double lo,
               double hi, bool hi_open, std::string_view allowed) {
  double out = 0.0;
  try {
    std::size_t used = 0;
    out = std::stod(std::string(value), &used);
    if (used != value.size()) bad(key, value, allowed);
  } catch (const std::logic_error&) {
    bad(key, value, allowed);
  }
  if (!(out >= lo) || (hi_open ? !(out < hi) : !(out <= hi))) {
    bad(key, value, allowed);
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad(key, value, "true or false");
}

std::vector<std::uint64_t> to_seeds(std::string_view key,
                                    std::string_view value) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto cell = trim(value.substr(
        pos, comma == std::string_view::npos ? value.size() - pos
                                             : comma - pos));
    if (cell.empty()) bad(key, value, "comma-separated non-negative integers");
    seeds.push_back(to_uint(key, cell, 0));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (seeds.empty()) bad(key, value, "comma-separated non-negative integers");
  return seeds;
}

// Shortest text that reads back to the same double.
std::string real_str(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

struct KeySpec {
  std::string_view key;
  std::function<void(ExperimentConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define PRB_UINT_KEY(NAME, FIELD, LO)                                       \
  KeySpec {                                                                 \
    NAME,                                                                   \
        [](ExperimentConfig& c, std::string_view k, std::string_view v) {   \
          c.FIELD = static_cast<decltype(c.FIELD)>(to_uint(k, v, LO));      \
        },                                                                  \
        [](const ExperimentConfig& c) { return std::to_string(c.FIELD); }   \
  }

#define PRB_REAL_KEY(NAME, FIELD, LO, HI, OPEN, ALLOWED)                   \
  KeySpec {                                                                 \
    NAME,                                                                   \
        [](ExperimentConfig& c, std::string_view k, std::string_view v) {   \
          c.FIELD = to_real(k, v, LO, HI, OPEN, ALLOWED);                   \
        },                                                                  \
        [](const ExperimentConfig& c) { return real_str(c.FIELD); }         \
  }

#define PRB_PATH_KEY(NAME, FIELD)                                          \
  KeySpec {                                                                 \
    NAME,                                                                   \
        [](ExperimentConfig& c, std::string_view, std::string_view v) {     \
          c.FIELD = std::string(v);                                         \
        },                                                                  \
        [](const ExperimentConfig& c) { return c.FIELD.string(); }          \
  }

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      KeySpec{"env.kind",
              [](ExperimentConfig& c, std::string_view k, std::string_view v) {
                const auto kind = parse_env_kind(v);
                if (!kind) {
                  bad(k, v, "synthetic, recommendation, social, nodeclass");
                }
                c.env.kind = *kind;
              },
              [](const ExperimentConfig& c) {
                return std::string(to_string(c.env.kind));
              }},
      PRB_UINT_KEY("env.n", env.synthetic.num_nodes, 2),
      PRB_UINT_KEY("env.d", env.synthetic.dim, 1),
      PRB_UINT_KEY("env.k", env.synthetic.k, 1),
      PRB_REAL_KEY("env.alpha", env.synthetic.alpha, 0.0, 1.0, true,
                   "real in [0, 1)"),
      KeySpec{"env.hidden",
              [](ExperimentConfig& c, std::string_view k, std::string_view v) {
                if (v == "linear") {
                  c.env.synthetic.hidden = HiddenFunction::linear;
                } else if (v == "quadratic") {
                  c.env.synthetic.hidden = HiddenFunction::quadratic;
                } else {
                  bad(k, v, "linear, quadratic");
                }
              },
              [](const ExperimentConfig& c) {
                return std::string(c.env.synthetic.hidden ==
                                           HiddenFunction::linear
                                       ? "linear"
                                       : "quadratic");
              }},
      PRB_PATH_KEY("env.edges", env.edges),
      PRB_PATH_KEY("env.features", env.features),
      PRB_PATH_KEY("env.labels", env.labels),
      PRB_UINT_KEY("env.num_users", env.num_users, 1),
      PRB_UINT_KEY("env.num_items", env.num_items, 1),
      PRB_UINT_KEY("env.pool_size", env.pool_size, 2),
      PRB_UINT_KEY("env.positives", env.positives, 1),
      PRB_UINT_KEY("env.social_degree", env.social_degree, 1),
      PRB_UINT_KEY("env.classes", env.classes, 2),
      KeySpec{"env.nodeclass_reveal_truth",
              [](ExperimentConfig& c, std::string_view k, std::string_view v) {
                c.env.nodeclass_reveal_truth = to_bool(k, v);
              },
              [](const ExperimentConfig& c) {
                return std::string(c.env.nodeclass_reveal_truth ? "true"
                                                                : "false");
              }},
      PRB_UINT_KEY("env.data_seed", env.data_seed, 0),

      KeySpec{"policy.kind",
              [](ExperimentConfig& c, std::string_view k, std::string_view v) {
                const auto kind = parse_policy_kind(v);
                if (!kind) {
                  bad(k, v,
                      "prb, prb-greedy, eenet, neural-greedy, neural-ucb, "
                      "neural-ts, random");
                }
                c.policy.kind = *kind;
              },
              [](const ExperimentConfig& c) {
                return std::string(to_string(c.policy.kind));
              }},
      PRB_REAL_KEY("policy.alpha", policy.pagerank.alpha, 0.0, 1.0, true,
                   "real in [0, 1)"),
      PRB_REAL_KEY("policy.nu", policy.nu, 0.0, kInf, true, "real >= 0"),
      PRB_REAL_KEY("policy.lambda", policy.lambda,
                   std::numeric_limits<double>::min(), kInf, true, "real > 0"),
      PRB_REAL_KEY("policy.grad_scale", policy.grad_scale,
                   std::numeric_limits<double>::min(), kInf, true, "real > 0"),

      PRB_REAL_KEY("pagerank.epsilon", policy.pagerank.epsilon,
                   std::numeric_limits<double>::min(), kInf, true, "real > 0"),
      PRB_UINT_KEY("pagerank.max_iters", policy.pagerank.max_iters, 1),

      PRB_UINT_KEY("net.f1_width", policy.f1.width, 1),
      PRB_UINT_KEY("net.f1_depth", policy.f1.depth, 2),
      PRB_REAL_KEY("net.f1_lr", policy.f1.learning_rate, 0.0, kInf, true,
                   "real >= 0"),
      PRB_UINT_KEY("net.f2_width", policy.f2.width, 1),
      PRB_UINT_KEY("net.f2_depth", policy.f2.depth, 2),
      PRB_REAL_KEY("net.f2_lr", policy.f2.learning_rate, 0.0, kInf, true,
                   "real >= 0"),
      PRB_UINT_KEY("net.epochs", policy.training.epochs, 1),
      PRB_UINT_KEY("net.batch_size", policy.training.batch_size, 1),

      PRB_UINT_KEY("schedule.early_every", policy.schedule.early_every, 1),
      PRB_UINT_KEY("schedule.switch_round", policy.schedule.switch_round, 0),
      PRB_UINT_KEY("schedule.late_every", policy.schedule.late_every, 1),

      PRB_UINT_KEY("run.T", T, 1),
      KeySpec{"run.seeds",
              [](ExperimentConfig& c, std::string_view k, std::string_view v) {
                c.seeds = to_seeds(k, v);
              },
              [](const ExperimentConfig& c) {
                std::string s;
                for (std::size_t i = 0; i < c.seeds.size(); ++i) {
                  if (i) s += ',';
                  s += std::to_string(c.seeds[i]);
                }
                return s;
              }},
      PRB_PATH_KEY("run.output_dir", output_dir),
  };
  return table;
}

#undef PRB_UINT_KEY
#undef PRB_REAL_KEY
#undef PRB_PATH_KEY

std::pair<std::string_view, std::string_view> split_assignment(
    std::string_view line, std::size_t lineno) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("config line " + std::to_string(lineno) +
                      ": expected 'section.key = value', got '" +
                      std::string(line) + "'");
  }
  return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value) {
  for (const auto& entry : key_table()) {
    if (entry.key == key) {
      entry.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config_text(std::string_view text,
                                   const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                              : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto [key, value] = split_assignment(line, lineno);
    apply_setting(cfg, key, value);
  }
  for (const auto& o : overrides) {
    const auto [key, value] = split_assignment(o, 0);
    apply_setting(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& entry : key_table()) {
    out += entry.key;
    out += " = ";
    out += entry.get(cfg);
    out += '\n';
  }
  return out;
}

std::vector<std::string_view> config_keys() {
  std::vector<std::string_view> keys;
  for (const auto& entry : key_table()) keys.push_back(entry.key);
  return keys;
}

}  // namespace prb
