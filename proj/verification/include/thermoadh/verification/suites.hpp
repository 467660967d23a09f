#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace thermoadh::verification {

struct CriterionResult {
  std::string id;    ///< "C1" ... "C12"
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Directory holding demo.json, equilibrium.json and corollary.json. The
/// THERMOADH_CONFIG_DIR environment variable overrides the built-in path.
std::filesystem::path config_dir();

CriterionResult check_proximal(std::size_t samples = 100000);
CriterionResult check_mollifier();
CriterionResult check_assembly_oracle();
CriterionResult check_gradient();
CriterionResult check_manufactured_equilibrium();
CriterionResult check_energy_law();
CriterionResult check_scalar_identities();
CriterionResult check_long_time();
CriterionResult check_corollary();
CriterionResult check_two_stage_limit();
CriterionResult check_splitting_order();
CriterionResult check_stationary_oracle();

/// proximal | assembly | stepper | longtime | corollary
const std::vector<std::string>& suite_names();

/// Runs every criterion of the suite, printing one line per criterion to
/// `out` as it finishes. Throws std::invalid_argument on an unknown suite.
std::vector<CriterionResult> run_suite(const std::string& suite, std::ostream& out);

/// Runs all twelve criteria in order.
std::vector<CriterionResult> run_all(std::ostream& out);

std::string format_result(const CriterionResult& r);

}  // namespace thermoadh::verification
