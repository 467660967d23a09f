#include "thermoadh/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "newton.hpp"
#include "thermoadh/error.hpp"

namespace thermoadh::stationary {

using assembly::Problem;

namespace {

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

Vec momentum_block(const Vec& u, const Vec& chi, double theta_bar, const Problem& pb,
                   const Vec& f_inf) {
  const Vec th = Vec::Constant(pb.sp().n_v, theta_bar);
  return assembly::momentum_kernel(u, u, chi, th, 0.0, f_inf, pb);
}

Vec damage_block(const Vec& u, const Vec& chi, double theta_bar, const Problem& pb) {
  const Vec ts = Vec::Constant(pb.sp().n_s, theta_bar);
  return assembly::damage_kernel(chi, chi, ts, u, 0.0, pb);
}

void solve_at(const Problem& pb, const Vec& f_inf, StationaryState& ss,
              const StationaryOptions& opt, StationaryReport& rep) {
  const int nw = pb.sp().n_w;
  const int ns = pb.sp().n_s;
  detail::NewtonOptions inner;
  inner.tol = opt.tol;
  inner.max_iters = 50;
  inner.polish = 0;
  const Vec ts = Vec::Constant(ns, ss.theta_bar);

  double prev = INFINITY;
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    ++rep.outer_iters;
    detail::newton_solve(
        ss.u, [&](const Vec& u) { return momentum_block(u, ss.chi, ss.theta_bar, pb, f_inf); },
        [&](const Vec& u) { return assembly::momentum_jacobian(u, ss.chi, 0.0, pb); }, inner);
    detail::newton_solve(
        ss.chi, [&](const Vec& c) { return damage_block(ss.u, c, ss.theta_bar, pb); },
        [&](const Vec& c) { return assembly::damage_jacobian(c, ts, ss.u, 0.0, pb); }, inner);
    const double r = residual_stationary(ss, pb, f_inf);
    if (r <= opt.tol) break;
    // Stagnating alternation: hand over to the joint Newton below.
    if (r > 0.5 * prev) break;
    prev = r;
  }

  Vec x(nw + ns);
  x << ss.u, ss.chi;
  StationaryState work = ss;
  const auto unpack = [&](const Vec& y) {
    work.u = y.head(nw);
    work.chi = y.tail(ns);
  };
  detail::NewtonOptions joint;
  joint.tol = opt.tol;
  joint.max_iters = 100;
  joint.polish = 1;
  const auto r = detail::newton_solve(
      x,
      [&](const Vec& y) {
        unpack(y);
        return stationary_residual_vector(work, pb, f_inf);
      },
      [&](const Vec& y) {
        unpack(y);
        return stationary_jacobian(work, pb);
      },
      joint);
  rep.joint_iters += r.iters;
  ss.u = x.head(nw);
  ss.chi = x.tail(ns);
  rep.residual = r.residual;
}

}  // namespace

Vec stationary_residual_vector(const StationaryState& ss, const Problem& pb, const Vec& f_inf) {
  Vec r(pb.sp().n_w + pb.sp().n_s);
  r << momentum_block(ss.u, ss.chi, ss.theta_bar, pb, f_inf),
      damage_block(ss.u, ss.chi, ss.theta_bar, pb);
  return r;
}

SpMat stationary_jacobian(const StationaryState& ss, const Problem& pb) {
  const int nw = pb.sp().n_w;
  const int ns = pb.sp().n_s;
  const Vec ts = Vec::Constant(ns, ss.theta_bar);
  const SpMat juu = assembly::momentum_jacobian(ss.u, ss.chi, 0.0, pb);
  const SpMat juc = assembly::momentum_chi_coupling(ss.u, ss.chi, pb);
  const SpMat jcc = assembly::damage_jacobian(ss.chi, ts, ss.u, 0.0, pb);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(juu.nonZeros() + 2 * juc.nonZeros() + jcc.nonZeros()));
  for (int k = 0; k < juu.outerSize(); ++k)
    for (SpMat::InnerIterator it(juu, k); it; ++it)
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < juc.outerSize(); ++k)
    for (SpMat::InnerIterator it(juc, k); it; ++it) {
      const int i = static_cast<int>(it.row());
      const int j = static_cast<int>(it.col());
      t.emplace_back(i, nw + j, it.value());
      t.emplace_back(nw + j, i, it.value());
    }
  for (int k = 0; k < jcc.outerSize(); ++k)
    for (SpMat::InnerIterator it(jcc, k); it; ++it)
      t.emplace_back(nw + static_cast<int>(it.row()), nw + static_cast<int>(it.col()),
                     it.value());
  SpMat j(nw + ns, nw + ns);
  j.setFromTriplets(t.begin(), t.end());
  return j;
}

double residual_stationary(const StationaryState& ss, const Problem& pb, const Vec& f_inf) {
  return inf_norm(stationary_residual_vector(ss, pb, f_inf));
}

double residual_of_state(const State& st, double theta_bar, const Problem& pb,
                         const Vec& f_inf) {
  const double r = residual_stationary(from_state(st, theta_bar), pb, f_inf);
  return std::max({r, inf_norm(pb.forms.stiff_v * st.theta),
                   inf_norm(pb.forms.stiff_s * st.theta_s)});
}

StationaryState solve_stationary(const Problem& pb, const Vec& f_inf, double theta_bar,
                                 const StationaryState& init, const StationaryOptions& opt,
                                 StationaryReport* report) {
  if (!(theta_bar >= 0.0) || !std::isfinite(theta_bar))
    throw Error("solve_stationary: theta_bar must be finite and >= 0");
  if (init.u.size() != pb.sp().n_w || init.chi.size() != pb.sp().n_s)
    throw Error("solve_stationary: initial guess has the wrong dimensions");
  if (f_inf.size() != pb.sp().n_w) throw Error("solve_stationary: F_inf has the wrong length");
  StationaryState ss = init;
  ss.theta_bar = theta_bar;
  StationaryReport rep;
  for (double mu : opt.mu_continuation) {
    if (!(mu > pb.rp.mu)) continue;
    Problem coarse = pb;
    coarse.rp.mu = mu;
    StationaryOptions o = opt;
    o.mu_continuation.clear();
    solve_at(coarse, f_inf, ss, o, rep);
  }
  solve_at(pb, f_inf, ss, opt, rep);
  rep.residual = residual_stationary(ss, pb, f_inf);
  if (report) *report = rep;
  if (!(rep.residual <= opt.tol)) {
    std::ostringstream os;
    os << "stationary solve stalled at residual " << rep.residual << " (tol " << opt.tol
       << ") after " << rep.outer_iters << " alternating sweeps and " << rep.joint_iters
       << " joint Newton iterations";
    throw NoConvergence(os.str());
  }
  State tmp = to_state(ss, pb);
  ss.aux = tmp.aux;
  return ss;
}

StationaryState from_state(const State& st, double theta_bar) {
  StationaryState ss;
  ss.theta_bar = theta_bar;
  ss.u = st.u;
  ss.chi = st.chi;
  ss.aux = st.aux;
  return ss;
}

State to_state(const StationaryState& ss, const Problem& pb) {
  State st;
  st.t = INFINITY;
  st.theta = Vec::Constant(pb.sp().n_v, ss.theta_bar);
  st.theta_s = Vec::Constant(pb.sp().n_s, ss.theta_bar);
  st.u = ss.u;
  st.chi = ss.chi;
  refresh_aux(st, pb.sp(), pb.mat, pb.rp.yosida());
  return st;
}

}  // namespace thermoadh::stationary
