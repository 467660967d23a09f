#pragma once

#include <functional>

#include "thermoadh/assembly.hpp"

namespace thermoadh::stepper {

/// Solves (M + sqrt(eps) K) theta = M theta0: the smoothing of initial
/// temperatures. Preserves integrals and does not increase the L2 norm.
Vec mollify(const SpMat& mass, const SpMat& stiff, const Vec& theta0, double eps);

/// Mollifies theta (bulk forms) and theta_s (surface forms) of `st`.
State mollify_initial(const State& st, const assembly::Problem& pb);

struct SolverOptions {
  double tol_newton = 1e-10;
  int max_iters = 40;
};

struct StepReport {
  double dt = 0.0;
  int iters_chi = 0;
  int iters_u = 0;
  int iters_theta = 0;
  double res_chi = 0.0;
  double res_u = 0.0;
  double res_theta = 0.0;
  assembly::ScalarDefects defects;

  int newton_iters() const { return iters_chi + iters_u + iters_theta; }
};

/// One staggered step of length dt from `prev` (new time prev.t + dt):
///   1. damage equation in chi, with u and theta_s from `prev`;
///   2. momentum balance in u, with theta from `prev` and the new chi;
///   3. both entropy equations jointly in (theta, theta_s).
/// Throws NewtonDivergence naming the failing sub-solve.
State step(const State& prev, double dt, const assembly::Problem& pb, const SolverOptions& opt,
           StepReport* report = nullptr);

struct Schedule {
  double t_end = 1.0;
  double dt0 = 1e-2;
  double dt_min = 1e-8;
  double dt_max = 1e-1;
  bool adaptive = true;
  int grow_after = 5;
};

/// Called after every accepted step; returning false stops the run.
using StepSink = std::function<bool(const State& st, const State& prev, const StepReport& rep)>;

struct RunResult {
  State final_state;
  int accepted = 0;
  int rejected = 0;
  bool stopped_by_sink = false;
};

/// Halves dt on Newton failure and doubles it after `grow_after`
/// consecutive successes, within [dt_min, dt_max]; the last step is
/// shortened to land on t_end. Throws StepTooSmall when a failed step
/// would require dt < dt_min.
RunResult run(const State& initial, const Schedule& sched, const assembly::Problem& pb,
              const SolverOptions& opt, const StepSink& sink = {});

}  // namespace thermoadh::stepper
