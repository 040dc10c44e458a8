#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "prb/cli.hpp"
#include "prb/config.hpp"
#include "prb/errors.hpp"

using namespace prb;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("prb_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kTinyRun =
    "env.kind = synthetic\n"
    "env.n = 40\n"
    "env.d = 4\n"
    "env.k = 6\n"
    "policy.kind = prb\n"
    "net.f1_width = 8\n"
    "net.f2_width = 8\n"
    "run.T = 60\n"
    "run.seeds = 1,2\n";

}  // namespace

TEST_CASE("empty config yields defaults") {
  const auto cfg = parse_config_text("");
  const ExperimentConfig defaults;
  CHECK(cfg.T == defaults.T);
  CHECK(cfg.seeds == defaults.seeds);
  CHECK(cfg.policy.pagerank.alpha == 0.85);
  CHECK(cfg.policy.f1.width == 100);
  CHECK(cfg.env.synthetic.num_nodes == 300);
}

TEST_CASE("comments, whitespace and overrides") {
  const auto cfg = parse_config_text("# header\n  run.T = 10   # trailing\n\npolicy.nu=0.5\n",
                                     {"run.T=20", "run.T=30"});
  CHECK(cfg.T == 30);
  CHECK(cfg.policy.nu == 0.5);
}

TEST_CASE("alpha range") {
  CHECK(parse_config_text("", {"policy.alpha=0"}).policy.pagerank.alpha == 0.0);
  CHECK_THROWS_AS(parse_config_text("", {"policy.alpha=1"}), ConfigError);
  CHECK_THROWS_AS(parse_config_text("", {"policy.alpha=-0.1"}), ConfigError);
  try {
    parse_config_text("policy.alpha = 1.0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("policy.alpha") != std::string::npos);
  }
}

TEST_CASE("unknown keys and bad values name the key") {
  try {
    parse_config_text("policy.alhpa = 0.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("policy.alhpa") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("run.T = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("run.T = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("policy.kind = oracle\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("run.seeds = 1,,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("just text\n"), ConfigError);
}

TEST_CASE("rendered config reads back identically") {
  auto cfg = parse_config_text(kTinyRun, {"policy.nu=0.123456789012345", "net.f1_lr=0.01"});
  const auto text = render_config(cfg);
  const auto back = parse_config_text(text);
  CHECK(render_config(back) == text);
  CHECK(back.policy.nu == cfg.policy.nu);
  for (auto key : config_keys()) {
    CHECK(text.find(std::string(key) + " = ") != std::string::npos);
  }
}

TEST_CASE("run writes identical CSVs for identical configs") {
  const auto dir = scratch("run");
  write_file(dir / "tiny.conf", kTinyRun);
  std::ostringstream out, err;
  CliInvocation a{Subcommand::run, dir / "tiny.conf", {}, dir / "a"};
  CliInvocation b{Subcommand::run, dir / "tiny.conf", {}, dir / "b"};
  REQUIRE(cmd_run(a, out, err) == 0);
  REQUIRE(cmd_run(b, out, err) == 0);
  for (auto name : {"run_1.csv", "run_2.csv", "summary.csv"}) {
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
  const auto s = read_summary_csv(dir / "a" / "summary.csv");
  const double r1 = read_run_csv(dir / "a" / "run_1.csv").back().cum_regret;
  const double r2 = read_run_csv(dir / "a" / "run_2.csv").back().cum_regret;
  CHECK(s.mean_final_regret == doctest::Approx((r1 + r2) / 2).epsilon(1e-8));
  std::filesystem::remove_all(dir);
}

TEST_CASE("PRB_SEED replaces the seed list") {
  const auto dir = scratch("seed");
  write_file(dir / "tiny.conf", kTinyRun);
  ::setenv("PRB_SEED", "7", 1);
  const auto cfg = resolve_config(CliInvocation{Subcommand::run, dir / "tiny.conf", {}, {}});
  ::unsetenv("PRB_SEED");
  CHECK(cfg.seeds == std::vector<std::uint64_t>{7});
  const auto plain = resolve_config(CliInvocation{Subcommand::run, dir / "tiny.conf", {}, {}});
  CHECK(plain.seeds == std::vector<std::uint64_t>{1, 2});
  std::filesystem::remove_all(dir);
}

TEST_CASE("run reports config errors with exit code 1") {
  const auto dir = scratch("bad");
  write_file(dir / "bad.conf", "policy.alpha = 2\n");
  std::ostringstream out, err;
  CHECK(cmd_run(CliInvocation{Subcommand::run, dir / "bad.conf", {}, dir / "o"}, out, err) == 1);
  CHECK(err.str().find("policy.alpha") != std::string::npos);
  CHECK(cmd_run(CliInvocation{Subcommand::run, dir / "nope.conf", {}, {}}, out, err) == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("inspect prints a config that parses back") {
  const auto dir = scratch("inspect");
  write_file(dir / "tiny.conf", kTinyRun);
  std::ostringstream out, err;
  REQUIRE(cmd_inspect(CliInvocation{Subcommand::inspect, dir / "tiny.conf", {"run.T=9"}, {}},
                      out, err) == 0);
  const auto back = parse_config_text(out.str());
  CHECK(back.T == 9);
  CHECK(back.env.synthetic.num_nodes == 40);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify catches a corrupted gradient") {
  std::ostringstream out, err;
  CliInvocation inv{Subcommand::verify, {}, {}, {}};
  const GradientFn broken = [](const MLPParams& p, std::span<const double> x) {
    auto g = gradient(p, x);
    g[0] *= 1.01;
    return g;
  };
  const auto bad = verify_gradient(20, 1, broken);
  CHECK_FALSE(bad.passed);
  CHECK(bad.measured > 1e-3);
  const auto good = verify_gradient(20, 1);
  CHECK(good.passed);
  CHECK(cmd_verify(inv, out, err, broken) != 0);
}
