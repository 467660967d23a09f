#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thermoadh/config.hpp"
#include "thermoadh/diagnostics.hpp"
#include "thermoadh/io.hpp"

/// Orchestration shared by the command-line tool and the verification suites.
namespace thermoadh::driver {

assembly::Problem build_problem(const RunConfig& cfg);

/// Nodal interpolation of the initial expressions at t = 0, followed by the
/// mollification of both temperatures when `mollify` is set. Throws
/// ConfigError when a nodal temperature is not positive or a nodal chi
/// leaves the box.
State initial_state(const RunConfig& cfg, const assembly::Problem& pb, bool mollify = true);

struct SimulationOptions {
  /// Output directory; nothing is written when empty.
  std::optional<std::filesystem::path> out_dir;
  /// Overrides schedule.snapshot_every when >= 0.
  int snapshot_every = -1;
};

struct SimulationResult {
  diagnostics::EnergyLedger ledger;
  std::optional<diagnostics::OmegaLimitReport> report;
  State final_state;
  stepper::RunResult run;
  double theta_bar = 0.0;  ///< mean of the final theta
  std::optional<double> stationary_residual;
  io::RunSummary summary;
};

/// Runs one trajectory. Propagates StepTooSmall and ConfigError.
SimulationResult simulate(const RunConfig& cfg, const SimulationOptions& opt = {});

/// L2 distance between two states on the same discretisation:
/// sqrt(|dtheta|^2 + |dtheta_s|^2 + |du|^2 + |dchi|^2).
double state_distance(const State& a, const State& b, const assembly::AssembledForms& f);

struct SweepEntry {
  double eps = 0.0;
  double mu = 0.0;
  bool ok = false;
  std::string error;
  State final_state;
  double wall_time_s = 0.0;
};

/// Distance between consecutive members of a chain: chain "eps" varies eps
/// at the fixed mu, chain "mu" varies mu at the fixed eps. Members are
/// ordered from the largest parameter down.
struct SweepRow {
  std::string chain;
  double fixed = 0.0;
  double from = 0.0;
  double to = 0.0;
  double distance = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::vector<SweepRow> table;
  bool all_ok = true;
};

/// Runs every (eps, mu) pair of the sweep lists (the base value stands in
/// for an empty list) on `jobs` worker threads.
SweepResult run_sweep(const RunConfig& cfg, int jobs,
                      const std::optional<std::filesystem::path>& out_dir = {});

std::string sweep_table_csv(const SweepResult& r);

struct StationaryOutcome {
  stationary::StationaryState state;
  stationary::StationaryReport report;
  double theta_bar = 0.0;
  int attempts = 0;
};

/// theta_bar comes from the config or, when absent, from a trajectory.
/// Restarts from seeded random guesses on NoConvergence; rethrows the last
/// NoConvergence when every attempt fails.
StationaryOutcome stationary_from_config(const RunConfig& cfg, std::uint64_t seed);

// Subcommands. Return the process exit code and report on `err`.
int cmd_run(const std::string& config_path, const std::optional<std::string>& out,
            int snapshot_every, std::ostream& log, std::ostream& err);
int cmd_sweep(const std::string& config_path, const std::optional<std::string>& out, int jobs,
              std::ostream& log, std::ostream& err);
int cmd_stationary(const std::string& config_path, const std::optional<std::string>& out,
                   std::uint64_t seed, std::ostream& log, std::ostream& err);

}  // namespace thermoadh::driver
