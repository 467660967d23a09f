#include "thermoadh/stepper.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "newton.hpp"
#include "thermoadh/error.hpp"

namespace thermoadh::stepper {

Vec mollify(const SpMat& mass, const SpMat& stiff, const Vec& theta0, double eps) {
  if (!(eps > 0.0)) throw Error("mollify: eps must be > 0");
  const SpMat sys = mass + std::sqrt(eps) * stiff;
  Eigen::SimplicialLDLT<SpMat> ldlt(sys);
  if (ldlt.info() != Eigen::Success) throw Error("mollify: factorisation failed");
  return ldlt.solve(mass * theta0);
}

State mollify_initial(const State& st, const assembly::Problem& pb) {
  State out = st;
  out.theta = mollify(pb.forms.mass_v, pb.forms.stiff_v, st.theta, pb.rp.eps);
  out.theta_s = mollify(pb.forms.mass_s, pb.forms.stiff_s, st.theta_s, pb.rp.eps);
  refresh_aux(out, pb.sp(), pb.mat, pb.rp.yosida());
  return out;
}

namespace {

detail::NewtonOptions newton_opts(const SolverOptions& opt) {
  detail::NewtonOptions n;
  n.tol = opt.tol_newton;
  n.max_iters = opt.max_iters;
  return n;
}

std::string describe(const char* what, const detail::NewtonResult& r) {
  std::ostringstream os;
  os << what << " residual " << r.residual << " after " << r.iters << " iterations";
  return os.str();
}

}  // namespace

State step(const State& prev, double dt, const assembly::Problem& pb, const SolverOptions& opt,
           StepReport* report) {
  using namespace assembly;
  if (!(dt > 0.0)) throw Error("step: dt must be > 0");
  const double inv_dt = 1.0 / dt;
  const double t = prev.t + dt;
  const auto nopt = newton_opts(opt);
  const int nv = pb.sp().n_v;
  StepReport rep;
  rep.dt = dt;

  State st = prev;
  st.t = t;

  // Damage.
  {
    const auto r = detail::newton_solve(
        st.chi,
        [&](const Vec& c) { return damage_kernel(c, prev.chi, prev.theta_s, prev.u, inv_dt, pb); },
        [&](const Vec& c) { return damage_jacobian(c, prev.theta_s, prev.u, inv_dt, pb); }, nopt);
    rep.iters_chi = r.iters;
    rep.res_chi = r.residual;
    if (!r.converged) throw NewtonDivergence("chi", describe("damage", r));
  }

  // Momentum.
  {
    const Vec load = mechanical_load(pb, t);
    const auto r = detail::newton_solve(
        st.u,
        [&](const Vec& u) {
          return momentum_kernel(u, prev.u, st.chi, prev.theta, inv_dt, load, pb);
        },
        [&](const Vec& u) { return momentum_jacobian(u, st.chi, inv_dt, pb); }, nopt);
    rep.iters_u = r.iters;
    rep.res_u = r.residual;
    if (!r.converged) throw NewtonDivergence("u", describe("momentum", r));
  }

  // Entropy equations.
  {
    const Vec h = entropy_load(pb, t);
    Vec x(nv + pb.sp().n_s);
    x << st.theta, st.theta_s;
    State work = st;
    const auto unpack = [&](const Vec& y) {
      work.theta = y.head(nv);
      work.theta_s = y.tail(pb.sp().n_s);
    };
    const auto r = detail::newton_solve(
        x,
        [&](const Vec& y) {
          unpack(y);
          return entropy_kernel(work, prev, inv_dt, h, pb);
        },
        [&](const Vec& y) {
          unpack(y);
          return entropy_jacobian(work, inv_dt, pb);
        },
        nopt);
    rep.iters_theta = r.iters;
    rep.res_theta = r.residual;
    if (!r.converged) throw NewtonDivergence("theta", describe("entropy", r));
    st.theta = x.head(nv);
    st.theta_s = x.tail(pb.sp().n_s);
  }

  refresh_aux(st, pb.sp(), pb.mat, pb.rp.yosida());
  rep.defects = scalar_identity_defects(st, prev, dt, pb, t);
  if (report) *report = rep;
  return st;
}

RunResult run(const State& initial, const Schedule& sched, const assembly::Problem& pb,
              const SolverOptions& opt, const StepSink& sink) {
  if (!(sched.t_end > initial.t)) throw Error("run: t_end must exceed the initial time");
  if (!(sched.dt0 > 0.0) || !(sched.dt_min > 0.0) || !(sched.dt_max >= sched.dt_min))
    throw Error("run: invalid step bounds");
  RunResult out;
  State cur = initial;
  double dt = std::clamp(sched.dt0, sched.dt_min, sched.dt_max);
  int streak = 0;
  // Relative slack so that floating-point drift in t does not create a
  // spurious sliver step at the end.
  const double t_tol = 1e-12 * std::max(1.0, std::abs(sched.t_end));
  while (cur.t < sched.t_end - t_tol) {
    double h = dt;
    if (cur.t + h > sched.t_end - t_tol) h = sched.t_end - cur.t;
    StepReport rep;
    State next;
    try {
      next = step(cur, h, pb, opt, &rep);
    } catch (const NewtonDivergence& e) {
      ++out.rejected;
      streak = 0;
      if (!sched.adaptive || h * 0.5 < sched.dt_min) {
        std::ostringstream os;
        os << "step rejected at t=" << cur.t << " with dt=" << h << " (dt_min=" << sched.dt_min
           << "): " << e.what() << "; min theta=" << cur.theta.minCoeff()
           << ", min theta_s=" << cur.theta_s.minCoeff() << ", chi range=[" << cur.chi.minCoeff()
           << ", " << cur.chi.maxCoeff() << "]";
        throw StepTooSmall(os.str());
      }
      dt = h * 0.5;
      continue;
    }
    if (std::abs(next.t - sched.t_end) <= t_tol) next.t = sched.t_end;
    ++out.accepted;
    const bool keep_going = !sink || sink(next, cur, rep);
    cur = std::move(next);
    if (sched.adaptive && ++streak >= sched.grow_after) {
      dt = std::min(2.0 * std::max(dt, h), sched.dt_max);
      streak = 0;
    }
    if (!keep_going) {
      out.stopped_by_sink = true;
      break;
    }
  }
  out.final_state = std::move(cur);
  return out;
}

}  // namespace thermoadh::stepper
