#pragma once

#include <vector>

#include "thermoadh/assembly.hpp"

/// Equilibrium system at a prescribed common temperature theta_bar:
///
///   a(u, v) + theta_bar int div v + int_c (p_mu(chi) u + (u.n)^+ n / mu).v = <F_inf, v>
///   int_c grad chi.grad w + (beta_mu(chi) + sigma'(chi) + lambda'(chi) theta_bar
///                              + H_mu(chi) |u|^2 / 2) w = 0
namespace thermoadh::stationary {

struct StationaryState {
  double theta_bar = 0.0;
  Vec u;
  Vec chi;
  AuxSelections aux;
};

struct StationaryOptions {
  int max_outer = 200;
  double tol = 1e-10;
  /// Yosida scales solved in sequence before the target mu, each one
  /// warm-starting the next. Values must be > the problem's mu.
  std::vector<double> mu_continuation;
};

struct StationaryReport {
  int outer_iters = 0;
  int joint_iters = 0;
  double residual = 0.0;
};

/// Alternating block Newton (u with chi fixed, then chi with u fixed),
/// followed by a Newton polish on the joint symmetric system. Throws
/// NoConvergence when the joint residual stays above tol.
StationaryState solve_stationary(const assembly::Problem& pb, const Vec& f_inf, double theta_bar,
                                 const StationaryState& init, const StationaryOptions& opt,
                                 StationaryReport* report = nullptr);

/// Stacked [momentum; damage] residual at theta_bar.
Vec stationary_residual_vector(const StationaryState& ss, const assembly::Problem& pb,
                               const Vec& f_inf);
/// Its Jacobian in (u, chi); symmetric.
SpMat stationary_jacobian(const StationaryState& ss, const assembly::Problem& pb);

/// Max-abs entry of both residual blocks.
double residual_stationary(const StationaryState& ss, const assembly::Problem& pb,
                           const Vec& f_inf);

/// Residual of a trajectory state read as a stationary candidate at
/// theta_bar: the stationary residual of (u, chi) together with the
/// max-abs entries of the discrete Laplacians of theta and theta_s.
double residual_of_state(const State& st, double theta_bar, const assembly::Problem& pb,
                         const Vec& f_inf);

StationaryState from_state(const State& st, double theta_bar);
/// Constant temperatures theta_bar, aux refreshed.
State to_state(const StationaryState& ss, const assembly::Problem& pb);

}  // namespace thermoadh::stationary
