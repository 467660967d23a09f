#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "common.hpp"
#include "thermoadh/error.hpp"
#include "thermoadh/stationary.hpp"

using namespace thermoadh;
using namespace thermoadh::stationary;
using testing_util::problem;

namespace {

MaterialLaws inert_surface() {
  MaterialLaws m;
  m.cohesion.w = 0.0;
  m.cohesion.s0 = 0.0;
  m.latent.l0 = 0.0;
  return m;
}

StationaryState guess(const assembly::Problem& pb, double theta_bar, double chi) {
  return from_state(testing_util::constant_state(pb, theta_bar, chi), theta_bar);
}

SourceData pushed() {
  SourceData src;
  src.f.y = ScalarExpr::constant(-0.3);
  src.g.x = ScalarExpr::constant(0.05);
  return src;
}

}  // namespace

TEST(Stationary, ManufacturedSolutionIsRecovered) {
  auto pb = problem(4, 4, inert_surface());
  const double tb = 1.1;
  pb.load_offset = SpMat(pb.forms.div.transpose()) * Vec::Constant(pb.sp().n_v, tb);
  const Vec f_inf = assembly::mechanical_load_limit(pb);
  const StationaryState init = guess(pb, tb, 0.4);
  EXPECT_LE(residual_stationary(init, pb, f_inf), 1e-13);
  StationaryReport rep;
  const auto ss = solve_stationary(pb, f_inf, tb, init, {}, &rep);
  EXPECT_LE(ss.u.lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_LE((ss.chi.array() - 0.4).abs().maxCoeff(), 1e-12);
  EXPECT_LE(rep.residual, 1e-10);
}

TEST(Stationary, ResidualBelowToleranceAndSymmetricJacobian) {
  const auto pb = problem(4, 4, {}, pushed());
  const Vec f_inf = assembly::mechanical_load_limit(pb);
  StationaryOptions o;
  o.mu_continuation = {1e-1};
  StationaryReport rep;
  const auto ss = solve_stationary(pb, f_inf, 0.9, guess(pb, 0.9, 0.5), o, &rep);
  EXPECT_LE(residual_stationary(ss, pb, f_inf), o.tol);
  EXPECT_EQ(rep.residual, residual_stationary(ss, pb, f_inf));
  const SpMat j = stationary_jacobian(ss, pb);
  EXPECT_LE(SpMat(j - SpMat(j.transpose())).norm(), 1e-12 * j.norm());
  EXPECT_EQ(ss.theta_bar, 0.9);
}

TEST(Stationary, ResidualGrowsLinearlyUnderPerturbation) {
  const auto pb = problem(4, 4, {}, pushed());
  const Vec f_inf = assembly::mechanical_load_limit(pb);
  const auto ss = solve_stationary(pb, f_inf, 0.9, guess(pb, 0.9, 0.5), {});
  double prev = 0.0;
  for (double delta : {1e-3, 1e-4, 1e-5}) {
    StationaryState p = ss;
    p.chi.array() += delta;
    const double r = residual_stationary(p, pb, f_inf);
    EXPECT_GT(r, 0.1 * delta);
    EXPECT_LT(r, 1e3 * delta);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / r, 10.0, 1.0);
    }
    prev = r;
  }
}

TEST(Stationary, DamageStaysNearTheBoxUnderContinuation) {
  // Larger pulls drive chi against the bounds; the Yosida penetration is O(mu).
  MaterialLaws m;
  m.cohesion.w = 3.0;
  const double big = std::numeric_limits<double>::max();
  double prev = big;
  for (double mu : {1e-1, 1e-2, 1e-3}) {
    RegularizationParams rp;
    rp.mu = mu;
    const auto pb = problem(4, 4, m, pushed(), rp);
    const Vec f_inf = assembly::mechanical_load_limit(pb);
    StationaryOptions o;
    for (double c : {1e-1, 1e-2}) if (c > mu) o.mu_continuation.push_back(c);
    const auto ss = solve_stationary(pb, f_inf, 0.9, guess(pb, 0.9, 0.5), o);
    const double out = std::max({0.0, -ss.chi.minCoeff(), ss.chi.maxCoeff() - 1.0});
    EXPECT_LE(out, mu * 10.0);
    EXPECT_LT(out, prev);
    prev = out;
  }
}

TEST(Stationary, UnreachableToleranceThrows) {
  const auto pb = problem(3, 3, {}, pushed());
  const Vec f_inf = assembly::mechanical_load_limit(pb);
  StationaryOptions o;
  o.tol = 1e-30;
  o.max_outer = 5;
  EXPECT_THROW(solve_stationary(pb, f_inf, 0.9, guess(pb, 0.9, 0.5), o), NoConvergence);
}

TEST(Stationary, BadInputsThrow) {
  const auto pb = problem(3, 3);
  const Vec f_inf = assembly::mechanical_load_limit(pb);
  EXPECT_THROW(solve_stationary(pb, f_inf, -1.0, guess(pb, 0.9, 0.5), {}), Error);
  StationaryState bad = guess(pb, 0.9, 0.5);
  bad.chi = Vec::Zero(2);
  EXPECT_THROW(solve_stationary(pb, f_inf, 0.9, bad, {}), Error);
}

TEST(Stationary, StateConversions) {
  const auto pb = problem(3, 3);
  State st = testing_util::constant_state(pb, 0.7, 0.2);
  st.u.setConstant(0.01);
  const auto ss = from_state(st, 0.8);
  EXPECT_EQ(ss.theta_bar, 0.8);
  EXPECT_EQ(ss.u, st.u);
  EXPECT_EQ(ss.chi, st.chi);
  const State back = to_state(ss, pb);
  EXPECT_TRUE(std::isinf(back.t));
  EXPECT_TRUE((back.theta.array() == 0.8).all());
  EXPECT_TRUE((back.theta_s.array() == 0.8).all());
  EXPECT_TRUE(aux_consistent(back, pb.sp(), pb.mat, pb.rp.yosida()));
}

TEST(Stationary, TrajectoryResidualSeesTemperatureGradients) {
  const auto pb = problem(4, 4, inert_surface());
  State st = testing_util::constant_state(pb, 1.0, 0.5);
  auto pm = pb;
  pm.load_offset = SpMat(pb.forms.div.transpose()) * st.theta;
  const Vec f_inf = assembly::mechanical_load_limit(pm);
  EXPECT_LE(residual_of_state(st, 1.0, pm, f_inf), 1e-13);
  st.theta = testing_util::interp_v(pb.sp(), [](Point p) { return 1.0 + 0.1 * p.x; });
  EXPECT_GT(residual_of_state(st, 1.0, pm, f_inf), 1e-4);
}
