#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "thermoadh/assembly.hpp"
#include "thermoadh/diagnostics.hpp"
#include "thermoadh/stationary.hpp"

namespace thermoadh::io {

/// Writes to a sibling temporary file and renames it over `path`.
/// Creates missing parent directories. Throws Error on I/O failure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trip decimal form.
std::string fmt(double v);

std::string ledger_csv(const diagnostics::EnergyLedger& ledger);

/// Snapshot text:
///   # time <t>            ("inf" for stationary states)
///   # dt <dt>
///   # mu <mu>
///   # eps <eps>
///   B <vertex> <x> <y> <theta> <ux> <uy>
///   S <node> <arclength> <x> <y> <theta_s> <chi>
std::string snapshot_text(const State& st, const assembly::Problem& pb, double dt,
                          const std::string& time_token = "");
std::string stationary_snapshot(const stationary::StationaryState& ss,
                                const assembly::Problem& pb);

struct RunSummary {
  std::string run_id;
  double eps = 0.0;
  double mu = 0.0;
  bool equilibrium = false;
  double theta_bar_estimate = 0.0;
  std::map<std::string, double> final_norms;
  std::optional<double> stationary_residual;
  double wall_time_s = 0.0;
  std::map<std::string, double> extra;
};

std::string summary_json(const RunSummary& s);

/// Small matplotlib script that plots the ledger next to it.
std::string plot_script(const std::string& ledger_name = "ledger.csv");

}  // namespace thermoadh::io
