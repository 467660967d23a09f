#pragma once

#include <memory>

#include "thermoadh/materials.hpp"
#include "thermoadh/mesh.hpp"
#include "thermoadh/state.hpp"

/// Weak-form operators of the regularised evolution system.
///
/// Linear parts go through the constant sparse matrices in AssembledForms.
/// Nonlinear integrands are evaluated at quadrature points from interpolated
/// nodal values: the 3-point interior rule on triangles and the 2-point Gauss
/// rule on contact segments. Both are exact for products of P1 functions.
/// Element contributions are reduced in a fixed order, so every residual is
/// bit-reproducible.
namespace thermoadh::assembly {

struct AssembledForms {
  SpMat a;        ///< lambda_e div div + 2 mu_e eps:eps on W_h
  SpMat b;        ///< eps:eps on W_h (viscosity)
  SpMat stiff_v;  ///< grad.grad on V_h
  SpMat mass_v;
  SpMat stiff_s;  ///< surface grad.grad on S_h
  SpMat mass_s;
  SpMat div;      ///< n_v x n_w, entry (i, j) = int phi_i div psi_j
  SpMat mass_w;   ///< vector L2 mass on W_h
  double area = 0.0;
  double contact_length = 0.0;
};

AssembledForms assemble_constant_forms(const mesh::Spaces& sp, const MaterialLaws& mat);

/// Everything a residual needs: discretisation, constants, data and the
/// regularisation pair (eps, mu).
struct Problem {
  std::shared_ptr<const mesh::Spaces> spaces;
  AssembledForms forms;
  MaterialLaws mat;
  SourceData src;
  RegularizationParams rp;
  /// Constant W_h-dual load added to <F(t), v> when non-empty. Lets tests
  /// balance loads that no bulk force or traction expression can produce.
  Vec load_offset;

  const mesh::Spaces& sp() const { return *spaces; }
};

Problem make_problem(std::shared_ptr<const mesh::Spaces> spaces, MaterialLaws mat,
                     SourceData src, RegularizationParams rp);

/// <h(t), phi_i> on V_h.
Vec entropy_load(const Problem& pb, double t);
/// <F(t), psi_j> = int f.psi_j + int_traction g.psi_j on W_h.
Vec mechanical_load(const Problem& pb, double t);
/// Limit load F_inf as t -> infinity (throws Error when the data oscillate).
Vec mechanical_load_limit(const Problem& pb);

// ---------------------------------------------------------------------------
// Residuals of the time-discrete system. `st` is the new state, `prev` the
// previous one, time derivatives are difference quotients over dt.

/// b((u - u_prev)/dt, v) + a(u, v) + <theta, div v>
///   + int_c (p_mu(chi) u + (u.n)^+ n / mu).v - <F(t), v>
Vec momentum_residual(const State& st, const State& prev, double dt, const Problem& pb, double t);

/// int_c [(chi - chi_prev)/dt v + grad chi.grad v
///   + (beta_mu(chi) + sigma'(chi) + lambda'(chi) theta_s + H_mu(chi) |u|^2 / 2) v]
/// with theta_s and u taken from `st`.
Vec damage_residual(const State& st, const State& prev, double dt, const Problem& pb);

Vec bulk_entropy_residual(const State& st, const State& prev, double dt, const Problem& pb,
                          double t);
Vec surface_entropy_residual(const State& st, const State& prev, double dt, const Problem& pb);

// ---------------------------------------------------------------------------
// Kernels with an explicit inverse time step. inv_dt = 0 drops every rate
// term, which is how the stationary system reuses them.

Vec momentum_kernel(const Vec& u, const Vec& u_prev, const Vec& chi, const Vec& theta,
                    double inv_dt, const Vec& load, const Problem& pb);
SpMat momentum_jacobian(const Vec& u, const Vec& chi, double inv_dt, const Problem& pb);

Vec damage_kernel(const Vec& chi, const Vec& chi_prev, const Vec& theta_s, const Vec& u,
                  double inv_dt, const Problem& pb);
SpMat damage_jacobian(const Vec& chi, const Vec& theta_s, const Vec& u, double inv_dt,
                      const Problem& pb);

/// Stacked [bulk; surface] entropy residuals; h_load is <h, phi_i>.
Vec entropy_kernel(const State& st, const State& prev, double inv_dt, const Vec& h_load,
                   const Problem& pb);

/// Jacobian of [bulk; surface] entropy residuals with respect to
/// [theta; theta_s], for fixed (u, chi) from `st`.
SpMat entropy_jacobian(const State& st, double inv_dt, const Problem& pb);

/// Off-diagonal coupling blocks of the stationary (u, chi) system:
/// d(momentum)/d(chi), n_w x n_s.
SpMat momentum_chi_coupling(const Vec& u, const Vec& chi, const Problem& pb);

// ---------------------------------------------------------------------------
// Energies and dissipation.

struct EnergyBreakdown {
  double mech = 0.0;     ///< a(u, u) / 2
  double adh = 0.0;      ///< int_c |grad chi|^2/2 + beta_hat_mu + sigma + p_mu(chi) |u|^2 / 2
  double imp = 0.0;      ///< int_c ((u.n)^+)^2 / (2 mu)
  /// Regularised thermal energy int I_mu(theta) + int_c I_mu(theta_s)
  /// + eps/2 (||theta||_{H^1}^2 + ||theta_s||_{H^1(c)}^2).
  double th = 0.0;
  double total = 0.0;
  double mass_th = 0.0;  ///< int theta + int_c theta_s
  double sigma_floor = 0.0;  ///< int_c sigma(chi) alone (the possibly negative part of adh)
};

EnergyBreakdown free_energy(const State& st, const Problem& pb);

struct DissipationBreakdown {
  double grad_theta = 0.0;    ///< int |grad theta|^2
  double visc = 0.0;          ///< b(u_t, u_t)
  double grad_theta_s = 0.0;  ///< int_c |grad theta_s|^2
  double chi_t = 0.0;         ///< int_c |chi_t|^2
  double exchange = 0.0;      ///< int_c k(chi) (theta - theta_s)^2
  double total = 0.0;
};

DissipationBreakdown dissipation_rate(const State& st, const State& prev, double dt,
                                      const Problem& pb);

/// Defects of the bulk and surface entropy balances tested by v = 1,
/// evaluated directly from the integrals (not by summing residual entries).
struct ScalarDefects {
  double bulk = 0.0;
  double surface = 0.0;
};
ScalarDefects scalar_identity_defects(const State& st, const State& prev, double dt,
                                      const Problem& pb, double t);

/// Work of the data over one step: dt <h(t), theta> + <F(t), u - u_prev>.
double data_work(const State& st, const State& prev, double dt, const Problem& pb, double t);

/// int_c [|grad chi|^2/2 + beta_hat_mu(chi) + sigma(chi) + lambda(chi) theta_s
///        + p_mu(chi) |u|^2 / 2]; its gradient in chi is the damage residual
/// without the rate term.
double surface_free_energy(const State& st, const Problem& pb);

// ---------------------------------------------------------------------------
// Norms used by the monitors.

double l2_norm_v(const Vec& v, const AssembledForms& f);
double l2_norm_s(const Vec& s, const AssembledForms& f);
double l2_norm_w(const Vec& w, const AssembledForms& f);
/// sqrt(b(w, w)), a norm on W_h by Korn's inequality.
double w_norm(const Vec& w, const AssembledForms& f);
double grad_norm_v(const Vec& v, const AssembledForms& f);
double grad_norm_s(const Vec& s, const AssembledForms& f);
/// int_Omega theta / |Omega|.
double mean_v(const Vec& v, const AssembledForms& f);
double mean_s(const Vec& s, const AssembledForms& f);

}  // namespace thermoadh::assembly
