#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "thermoadh/assembly.hpp"
#include "thermoadh/stationary.hpp"

/// Brute-force reference implementations used by the acceptance suites.
///
/// DenseOracle re-derives every weak form from the raw triangulation:
/// barycentric coordinates come from a 3x3 solve at each physical
/// quadrature point, normals from the edge orientation, the clamped set from
/// the boundary tags, and the logarithmic resolvent from bisection. Only the
/// dof numbering and the quadrature rules are shared with the library.
namespace thermoadh::verification {

class DenseOracle {
 public:
  explicit DenseOracle(const assembly::Problem& pb);

  Vec momentum(const State& st, const State& prev, double dt, double t) const;
  Vec damage(const State& st, const State& prev, double dt) const;
  Vec bulk_entropy(const State& st, const State& prev, double dt, double t) const;
  Vec surface_entropy(const State& st, const State& prev, double dt) const;
  double free_energy(const State& st) const;
  double dissipation(const State& st, const State& prev, double dt) const;
  double surface_free_energy(const State& st) const;

  /// Stacked [momentum; damage] stationary residual at theta_bar.
  Vec stationary(const Vec& u, const Vec& chi, double theta_bar, const Vec& f_inf) const;

  /// <F(t), psi_j> including the problem's load offset.
  Vec load(double t) const;

  /// Bisection solve of exp(z) + mu z = x; returns z = ln r_mu(x).
  static double log_resolvent(double mu, double x);

  const assembly::Problem& problem() const { return *pb_; }

 private:
  struct Tri {
    std::array<int, 3> v;
    double area;
    Eigen::Matrix3d inv;  ///< maps (x, y, 1) to barycentric coordinates
  };
  struct Seg {
    std::array<int, 2> v;  ///< body vertices
    std::array<int, 2> s;  ///< surface nodes
    Point n;
    double len;
  };

  Vec momentum_impl(const Vec& u, const Vec& u_prev, const Vec& chi, const Vec& theta,
                    double inv_dt, const Vec& load) const;
  Vec damage_impl(const Vec& chi, const Vec& chi_prev, const Vec& theta_s, const Vec& u,
                  double inv_dt) const;
  Eigen::Vector3d bary(const Tri& t, Point p) const;
  Point tri_qp(const Tri& t, int q) const;
  Point seg_qp(const Seg& s, int q) const;
  double seg_coord(const Seg& s, Point p) const;
  double dofval(const Vec& u, int v, int c) const;

  const assembly::Problem* pb_;
  std::vector<Point> x_;
  std::vector<Tri> tris_;
  std::vector<Seg> contact_;
  std::vector<Seg> traction_;
  std::vector<int> dof_;
  int nv_ = 0, nw_ = 0, ns_ = 0;
};

struct OracleSolve {
  State state;
  double residual = 0.0;
  int iters = 0;
  bool converged = false;
};

/// One fully implicit step: all four equations at the new values, solved
/// together by damped Newton with a dense central-difference Jacobian.
OracleSolve monolithic_step(const DenseOracle& oracle, const State& prev, double dt,
                            const State& guess, double tol = 1e-12, int max_iters = 60);

struct MultiStartResult {
  std::vector<stationary::StationaryState> solutions;  ///< distinct converged points
  int starts = 0;
  int converged = 0;
};

/// Damped Newton with a finite-difference Jacobian from `starts` seeded
/// random guesses (u entries uniform in [-u_amp, u_amp], chi in [chi_lo, chi_hi]).
MultiStartResult multistart_stationary(const DenseOracle& oracle, const Vec& f_inf,
                                       double theta_bar, int starts, std::uint64_t seed,
                                       double u_amp = 0.2, double chi_lo = -0.5,
                                       double chi_hi = 1.5, double tol = 1e-12);

}  // namespace thermoadh::verification
