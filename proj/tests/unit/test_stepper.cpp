#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "thermoadh/error.hpp"
#include "thermoadh/stepper.hpp"

using namespace thermoadh;
using namespace thermoadh::stepper;
using testing_util::problem;

namespace {

MaterialLaws inert_surface() {
  MaterialLaws m;
  m.cohesion.w = 0.0;
  m.cohesion.s0 = 0.0;
  m.latent.l0 = 0.0;
  return m;
}

bool same(const State& a, const State& b) {
  return a.t == b.t && a.theta == b.theta && a.theta_s == b.theta_s && a.u == b.u && a.chi == b.chi;
}

}  // namespace

TEST(Mollify, PreservesIntegralAndShrinksNorms) {
  for (int n : {8, 16, 32}) {
    const auto pb = problem(n, n);
    const auto& f = pb.forms;
    const Vec th0 = testing_util::interp_v(pb.sp(), [](Point p) {
      return 1.0 + 0.5 * std::cos(7.0 * p.x) * std::cos(5.0 * p.y) + (p.x > 0.5 ? 0.3 : 0.0);
    });
    for (double eps : {1e-2, 1e-4}) {
      const Vec th = mollify(f.mass_v, f.stiff_v, th0, eps);
      const Vec one = Vec::Ones(th.size());
      EXPECT_NEAR(one.dot(f.mass_v * th), one.dot(f.mass_v * th0), 1e-12);
      const double l2 = th.dot(f.mass_v * th), l20 = th0.dot(f.mass_v * th0);
      EXPECT_LE(l2, l20 * (1 + 1e-12));
      EXPECT_LE(std::sqrt(eps) * th.dot(f.stiff_v * th), 0.5 * l20);
    }
  }
}

TEST(Mollify, InitialStateKeepsDimensions) {
  const auto pb = problem(4, 4);
  std::mt19937_64 rng(1);
  const State st = testing_util::random_state(pb, rng);
  const State m = mollify_initial(st, pb);
  EXPECT_EQ(m.theta.size(), st.theta.size());
  EXPECT_EQ(m.theta_s.size(), st.theta_s.size());
  EXPECT_EQ(m.u, st.u);
  EXPECT_EQ(m.chi, st.chi);
}

TEST(Step, ManufacturedEquilibriumIsFixed) {
  auto pb = problem(6, 6, inert_surface());
  const State st = testing_util::constant_state(pb, 1.2, 0.5);
  pb.load_offset = SpMat(pb.forms.div.transpose()) * st.theta;
  StepReport rep;
  const State nx = step(st, 0.1, pb, {}, &rep);
  EXPECT_NEAR(nx.t, 0.1, 1e-15);
  EXPECT_LE((nx.theta - st.theta).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_LE((nx.theta_s - st.theta_s).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_LE(nx.u.lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_LE((nx.chi - st.chi).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_EQ(rep.dt, 0.1);
}

TEST(Step, ManufacturedRunDoesNotDissipate) {
  auto pb = problem(4, 4, inert_surface());
  const State st = testing_util::constant_state(pb, 0.9, 0.3);
  pb.load_offset = SpMat(pb.forms.div.transpose()) * st.theta;
  Schedule s;
  s.t_end = 1.0;
  s.dt0 = 0.1;
  s.dt_max = 0.1;
  s.adaptive = false;
  double worst = 0.0;
  const auto r = run(st, s, pb, {}, [&](const State& a, const State& b, const StepReport& rep) {
    worst = std::max(worst, assembly::dissipation_rate(a, b, rep.dt, pb).total);
    return true;
  });
  EXPECT_EQ(r.accepted, 10);
  EXPECT_LT(worst, 1e-12);
}

TEST(Step, ResidualsAreBelowTolerance) {
  const auto pb = problem(4, 4);
  std::mt19937_64 rng(2);
  const State st = testing_util::random_state(pb, rng);
  StepReport rep;
  const State nx = step(st, 0.05, pb, {}, &rep);
  EXPECT_LE(rep.res_chi, 1e-10);
  EXPECT_LE(rep.res_u, 1e-10);
  EXPECT_LE(rep.res_theta, 1e-10);
  EXPECT_GT(rep.newton_iters(), 0);
  EXPECT_TRUE(aux_consistent(nx, pb.sp(), pb.mat, pb.rp.yosida()));
  EXPECT_GT(nx.theta.minCoeff(), 0.0);
}

TEST(Step, DeterministicRuns) {
  SourceData src;
  src.h = ScalarExpr({ExprTerm{.c = 0.3, .kx = 3.0, .decay = 1.0}});
  src.f.y = ScalarExpr::constant(-0.1);
  const auto pb = problem(5, 5, {}, src);
  std::mt19937_64 rng(3);
  const State st = testing_util::random_state(pb, rng);
  Schedule s;
  s.t_end = 0.5;
  s.dt0 = 0.05;
  const auto a = run(st, s, pb, {});
  const auto b = run(st, s, pb, {});
  EXPECT_TRUE(same(a.final_state, b.final_state));
  EXPECT_EQ(a.accepted, b.accepted);
}

TEST(Run, LandsExactlyOnTheEndTime) {
  const auto pb = problem(3, 3);
  const State st = testing_util::constant_state(pb, 1.0, 0.5);
  Schedule s;
  s.t_end = 0.37;
  s.dt0 = 0.1;
  s.dt_max = 0.1;
  const auto r = run(st, s, pb, {});
  EXPECT_EQ(r.final_state.t, 0.37);
  EXPECT_EQ(r.rejected, 0);
}

TEST(Run, SinkCanStop) {
  const auto pb = problem(3, 3);
  const State st = testing_util::constant_state(pb, 1.0, 0.5);
  Schedule s;
  s.t_end = 1.0;
  s.dt0 = 0.1;
  const auto r = run(st, s, pb, {}, [](const State&, const State&, const StepReport&) {
    return false;
  });
  EXPECT_TRUE(r.stopped_by_sink);
  EXPECT_EQ(r.accepted, 1);
}

TEST(Run, UnreachableToleranceGivesStepTooSmall) {
  const auto pb = problem(3, 3);
  std::mt19937_64 rng(4);
  const State st = testing_util::random_state(pb, rng);
  SolverOptions opt;
  opt.tol_newton = 1e-30;
  opt.max_iters = 5;
  Schedule s;
  s.dt0 = 0.1;
  s.dt_min = 0.02;
  EXPECT_THROW(run(st, s, pb, opt), StepTooSmall);
  s.adaptive = false;
  EXPECT_THROW(run(st, s, pb, opt), StepTooSmall);
}

TEST(Step, DivergenceNamesTheSubsolve) {
  const auto pb = problem(3, 3);
  std::mt19937_64 rng(5);
  const State st = testing_util::random_state(pb, rng);
  SolverOptions opt;
  opt.tol_newton = 1e-30;
  opt.max_iters = 3;
  try {
    step(st, 0.1, pb, opt);
    FAIL() << "expected NewtonDivergence";
  } catch (const NewtonDivergence& e) {
    EXPECT_EQ(e.subsolve(), "chi");
  }
}
