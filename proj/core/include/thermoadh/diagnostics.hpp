#pragma once

#include <array>
#include <string>
#include <vector>

#include "thermoadh/assembly.hpp"
#include "thermoadh/stationary.hpp"
#include "thermoadh/stepper.hpp"

namespace thermoadh::diagnostics {

/// One ledger line. Rates are difference quotients over the step ending at t.
struct LedgerRow {
  double t = 0.0;
  double dt = 0.0;
  double E_mech = 0.0, E_adh = 0.0, E_imp = 0.0, E_th = 0.0, L_total = 0.0;
  double D_total = 0.0, D_grad_theta = 0.0, D_visc = 0.0, D_grad_theta_s = 0.0;
  double D_chi_t = 0.0, D_exchange = 0.0;
  double min_theta = 0.0;
  int newton_iters = 0;
  double min_theta_s = 0.0;
  double mass_th = 0.0;
  double work = 0.0;  ///< data work over the step
  double bulk_identity = 0.0, surface_identity = 0.0;
  double ind_u_t = 0.0, ind_chi_t = 0.0, ind_grad_theta = 0.0, ind_grad_theta_s = 0.0;
  double ind_exchange = 0.0;
  double mean_gap = 0.0;     ///< |mean theta - mean theta_s|
  double sigma_floor = 0.0;  ///< int_c sigma(chi)
};

/// Ledger column names in CSV order.
const std::vector<std::string>& ledger_columns();
std::vector<double> ledger_values(const LedgerRow& row);

constexpr int kIndicatorCount = 5;
/// Names of the five equilibrium indicators, in LedgerRow order.
const std::array<std::string, kIndicatorCount>& indicator_names();
std::array<double, kIndicatorCount> indicators(const LedgerRow& row);

class EnergyLedger {
 public:
  /// Throws Error unless row.t exceeds the last recorded time.
  void append(const LedgerRow& row);
  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  const LedgerRow& back() const { return rows_.back(); }

  /// Time integral of the L2 norms of the data over the run horizon.
  double data_norm = 0.0;

 private:
  std::vector<LedgerRow> rows_;
};

/// Dissipation recomputed element by element, independently of
/// assembly::dissipation_rate.
assembly::DissipationBreakdown recompute_dissipation(const State& st, const State& prev,
                                                     double dt, const assembly::Problem& pb);

/// Row for the initial state: energies only, zero rates.
void ledger_start(EnergyLedger& ledger, const State& st, const assembly::Problem& pb);

void ledger_append(EnergyLedger& ledger, const State& st, const State& prev, double dt,
                   const assembly::Problem& pb, const stepper::StepReport& rep);

/// Trapezoidal estimate of int_0^T (|h_load(t)| + |F(t)|) dt, with Euclidean
/// norms of the assembled load vectors.
double data_norm(const assembly::Problem& pb, double t_end, int samples = 256);

struct OmegaLimitReport {
  double window = 0.0;
  double t_end = 0.0;
  std::array<double, kIndicatorCount> sup{};  ///< sup of each indicator over the window
  bool equilibrium = false;
  double mean_gap = 0.0;
  double stationary_residual = -1.0;  ///< filled by callers; negative when not computed
};

/// Flag is set iff every indicator stays below tol over the trailing window.
/// Throws InsufficientHistory when the ledger spans less than the window.
OmegaLimitReport detect_equilibrium(const EnergyLedger& ledger, double window, double tol);

struct DistanceRecord {
  double theta_l2 = 0.0, theta_max = 0.0;     ///< against theta_bar
  double theta_s_l2 = 0.0, theta_s_max = 0.0;
  double u_l2 = 0.0, u_max = 0.0;
  double chi_l2 = 0.0, chi_max = 0.0;
};

/// Throws Error when the state and the stationary solution live on
/// different discretisations.
DistanceRecord compare_to_stationary(const State& terminal, const stationary::StationaryState& ss,
                                     const assembly::Problem& pb);

/// Energy law summary of a run without data.
struct EnergyLawCheck {
  double max_rel_uptick = 0.0;  ///< max over steps of (L_n - L_{n-1}) / max(|L_{n-1}|, tiny)
  double drop = 0.0;            ///< L_0 - L_N + total work
  double dissipated = 0.0;      ///< sum of dt D
  /// drop / dissipated; the scheme adds numerical dissipation, so this is
  /// expected to be >= 1 up to splitting error.
  double balance_ratio = 0.0;
};
EnergyLawCheck check_energy_law(const EnergyLedger& ledger);

/// Least-squares slope of each indicator against time over the trailing
/// fraction of the ledger.
std::array<double, kIndicatorCount> indicator_slopes(const EnergyLedger& ledger,
                                                     double fraction = 0.2);

}  // namespace thermoadh::diagnostics
