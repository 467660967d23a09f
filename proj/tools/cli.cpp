#include "cli.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "thermoadh/driver.hpp"
#include "thermoadh/verification/suites.hpp"

namespace thermoadh::cli {

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermo-visco-elastic adhesive contact: runs, sweeps, stationary solves"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  int jobs = 1;
  std::uint64_t seed = 0;
  int snapshot_every = -1;
  std::string suite;

  const auto add_common = [&](CLI::App* sc) {
    sc->add_option("--config", config, "Configuration file (JSON)")->required();
    sc->add_option("--out", out_dir, "Output directory (default: output.dir of the config)");
  };
  auto* run = app.add_subcommand("run", "Simulate one trajectory");
  add_common(run);
  run->add_option("--snapshot-every", snapshot_every, "Snapshot cadence in accepted steps")
      ->check(CLI::NonNegativeNumber);
  auto* sweep = app.add_subcommand("sweep", "Run every (eps, mu) pair of the sweep lists");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  auto* stat = app.add_subcommand("stationary", "Solve the stationary system");
  add_common(stat);
  stat->add_option("--seed", seed, "Seed of the multi-start restarts");
  auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
  verify->add_option("suite", suite, "proximal | assembly | stepper | longtime | corollary")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return 1;
  }

  const std::optional<std::string> od =
      out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
  if (*run) return driver::cmd_run(config, od, snapshot_every, out, err);
  if (*sweep) return driver::cmd_sweep(config, od, jobs, out, err);
  if (*stat) return driver::cmd_stationary(config, od, seed, out, err);

  std::vector<verification::CriterionResult> res;
  try {
    res = verification::run_suite(suite, out);
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return 1;
  }
  bool ok = true;
  for (const auto& r : res) ok = ok && r.pass;
  out << "suite " << suite << ": " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

}  // namespace thermoadh::cli
