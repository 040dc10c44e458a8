#include "prb/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>

#include "prb/errors.hpp"

namespace prb {

ExperimentConfig resolve_config(const CliInvocation& inv) {
  auto overrides = inv.overrides;
  if (inv.output_dir) overrides.push_back("run.output_dir=" + inv.output_dir->string());
  if (const char* seed = std::getenv("PRB_SEED"); seed && *seed) {
    overrides.push_back(std::string("run.seeds=") + seed);
  }
  return parse_config(inv.config_path, overrides);
}

int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = resolve_config(inv);
    std::filesystem::create_directories(cfg.output_dir);
    const auto result = run_all(cfg);
    for (const auto& f : result.failures) {
      err << "seed " << f.seed << " failed: " << f.message << '\n';
    }
    if (result.logs.empty()) {
      err << "error: every seed failed\n";
      return 1;
    }
    if (!result.failures.empty()) {
      err << "warning: summary covers " << result.logs.size() << " of "
          << cfg.seeds.size() << " seeds\n";
    }
    for (const auto& log : result.logs) {
      write_run_csv(cfg.output_dir / ("run_" + std::to_string(log.seed) + ".csv"),
                    log);
    }
    write_summary_csv(cfg.output_dir / "summary.csv", result.summary);
    const auto& s = result.summary;
    out << s.policy << " on " << s.env << ": T=" << s.T << " seeds=" << s.seeds
        << " final regret " << format_real(s.mean_final_regret) << " +- "
        << format_real(s.std_final_regret)
        << (s.degenerate ? " (single run)" : "") << '\n';
    return result.failures.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_verify(const CliInvocation&, std::ostream& out, std::ostream& err,
               const GradientFn& grad) {
  try {
    const auto start = std::chrono::steady_clock::now();
    bool all = true;
    for (const auto& r : run_verify_suites(grad)) {
      out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail
          << '\n';
      all = all && r.passed;
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    out << (all ? "all suites passed" : "some suites FAILED") << " in "
        << format_real(secs) << " s\n";
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_inspect(const CliInvocation& inv, std::ostream& out,
                std::ostream& err) {
  try {
    out << render_config(resolve_config(inv));
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"PageRank bandits for online link prediction"};
  app.require_subcommand(1);

  CliInvocation inv;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "run an experiment and write CSVs");
  run->add_option("--config", inv.config_path, "config file")->required();
  run->add_option("--set", inv.overrides, "override, section.key=value")
      ->take_all();
  run->add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run the built-in oracle suites");

  auto* inspect = app.add_subcommand("inspect", "print the resolved config");
  inspect->add_option("--config", inv.config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (!out_dir.empty()) inv.output_dir = out_dir;
  if (run->parsed()) {
    inv.subcommand = Subcommand::run;
    return cmd_run(inv, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    inv.subcommand = Subcommand::verify;
    return cmd_verify(inv, std::cout, std::cerr);
  }
  inv.subcommand = Subcommand::inspect;
  return cmd_inspect(inv, std::cout, std::cerr);
}

}  // namespace prb
