#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermoadh/materials.hpp"
#include "thermoadh/mesh.hpp"
#include "thermoadh/stepper.hpp"

namespace thermoadh {

struct GeometryConfig {
  int nx = 16;
  int ny = 16;
  mesh::RectGeometry rect;
};

struct InitialConfig {
  ScalarExpr theta = ScalarExpr::constant(1.0);
  ScalarExpr theta_s = ScalarExpr::constant(1.0);
  VectorExpr u;
  ScalarExpr chi = ScalarExpr::constant(0.5);
};

struct ScheduleConfig {
  stepper::Schedule schedule;
  int snapshot_every = 0;  ///< 0 writes only the final snapshot
  bool stop_on_equilibrium = false;
};

struct DiagnosticsConfig {
  double tol = 1e-6;
  /// Detector window; non-positive means 50 dt_max.
  double window = 0.0;
  double effective_window(const stepper::Schedule& s) const {
    return window > 0.0 ? window : 50.0 * s.dt_max;
  }
};

struct StationaryConfig {
  /// Common temperature; when absent it is estimated from a trajectory.
  std::optional<double> theta_bar;
  int max_outer = 200;
  double tol = 1e-10;
  std::vector<double> mu_continuation;
  int restarts = 8;
};

struct RunConfig {
  std::string run_id = "run";
  GeometryConfig geometry;
  MaterialLaws material;
  RegularizationParams regularization;
  std::vector<double> eps_sweep;
  std::vector<double> mu_sweep;
  SourceData sources;
  InitialConfig initial;
  ScheduleConfig schedule;
  stepper::SolverOptions solver;
  DiagnosticsConfig diagnostics;
  StationaryConfig stationary;
  std::string output_dir = "out";
};

/// Parses the JSON dialect documented in the README. Unknown keys and
/// invalid values raise ConfigError naming the offending path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Normalised JSON form: every field present, expressions as term lists.
std::string dump_config(const RunConfig& cfg);

/// Field checks that do not need the mesh. Nodal positivity of the initial
/// temperatures is checked when the initial state is built.
void validate_config(const RunConfig& cfg);

}  // namespace thermoadh
