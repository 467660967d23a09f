#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <random>

#include "common.hpp"
#include "thermoadh/error.hpp"

using namespace thermoadh;
using namespace thermoadh::assembly;
using testing_util::problem;

namespace {

double max_abs(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

MaterialLaws inert_surface() {
  MaterialLaws m;
  m.cohesion.w = 0.0;
  m.cohesion.s0 = 0.0;
  m.latent.l0 = 0.0;
  return m;
}

}  // namespace

TEST(Forms, BilinearFormsAreSymmetric) {
  const Problem pb = problem(5, 4);
  const auto& f = pb.forms;
  for (const SpMat* m : {&f.a, &f.b, &f.stiff_v, &f.mass_v, &f.stiff_s, &f.mass_s, &f.mass_w})
    EXPECT_EQ((SpMat(*m - SpMat(m->transpose()))).norm(), 0.0);
}

TEST(Forms, ElasticityIsPositiveDefiniteOnW) {
  const Problem pb = problem(6, 6);
  Eigen::SimplicialLDLT<SpMat> ldlt(pb.forms.a);
  ASSERT_EQ(ldlt.info(), Eigen::Success);
  EXPECT_GT(ldlt.vectorD().minCoeff(), 0.0);
  Eigen::SimplicialLDLT<SpMat> ldlt_b(pb.forms.b);
  ASSERT_EQ(ldlt_b.info(), Eigen::Success);
  EXPECT_GT(ldlt_b.vectorD().minCoeff(), 0.0);
}

TEST(Forms, LinearFieldsIntegrateExactly) {
  mesh::RectGeometry g;
  g.x1 = 2.0;
  const Problem pb = problem(4, 3, {}, {}, {}, g);
  const auto& sp = pb.sp();
  const auto& f = pb.forms;
  const double area = 2.0;
  EXPECT_NEAR(f.area, area, 1e-14);
  EXPECT_NEAR(f.contact_length, 2.0, 1e-14);
  const Vec one = Vec::Ones(sp.n_v);
  EXPECT_NEAR(one.dot(f.mass_v * one), area, 1e-13);
  EXPECT_LE(max_abs(f.stiff_v * one), 1e-13);
  const Vec x = testing_util::interp_v(sp, [](Point p) { return p.x; });
  EXPECT_NEAR(x.dot(f.stiff_v * x), area, 1e-13);
  EXPECT_NEAR(one.dot(f.mass_v * x), 2.0, 1e-13);

  // u = (0, 1 - y): eps_yy = -1, div u = -1, so a(u, u) = (lambda + 2 mu) |Omega|.
  const Vec uy = testing_util::interp_w(sp, [](Point p) { return Point{0.0, 1.0 - p.y}; });
  EXPECT_NEAR(uy.dot(f.a * uy), 3.0 * area, 1e-12);
  EXPECT_NEAR(uy.dot(f.b * uy), area, 1e-12);
  EXPECT_NEAR(one.dot(f.div * uy), -area, 1e-12);
  // u = (1 - y, 0): pure shear, eps:eps = 1/2, div u = 0.
  const Vec ux = testing_util::interp_w(sp, [](Point p) { return Point{1.0 - p.y, 0.0}; });
  EXPECT_NEAR(ux.dot(f.a * ux), area, 1e-12);
  EXPECT_NEAR(ux.dot(f.b * ux), 0.5 * area, 1e-12);
  EXPECT_NEAR(one.dot(f.div * ux), 0.0, 1e-12);

  const Vec s1 = Vec::Ones(sp.n_s);
  EXPECT_NEAR(s1.dot(f.mass_s * s1), 2.0, 1e-14);
  EXPECT_LE(max_abs(f.stiff_s * s1), 1e-13);
}

TEST(Forms, LameConstantsScaleTheElasticForm) {
  MaterialLaws m;
  m.lame_lambda = 2.5;
  m.lame_mu = 0.3;
  const Problem pb = problem(3, 3, m);
  const Vec uy = testing_util::interp_w(pb.sp(), [](Point p) { return Point{0.0, 1.0 - p.y}; });
  EXPECT_NEAR(uy.dot(pb.forms.a * uy), 2.5 + 2 * 0.3, 1e-12);
}

TEST(Residuals, ZeroStateMomentumVanishes) {
  const Problem pb = problem(4, 4);
  const State z = zero_state(pb.sp());
  EXPECT_EQ(max_abs(momentum_residual(z, z, 0.1, pb, 0.0)), 0.0);
}

TEST(Residuals, ThermalLoadIsBalancedByOffset) {
  Problem pb = problem(6, 5);
  const State st = testing_util::constant_state(pb, 1.3, 0.5);
  pb.load_offset = SpMat(pb.forms.div.transpose()) * st.theta;
  EXPECT_LE(max_abs(momentum_residual(st, st, 0.1, pb, 0.0)), 1e-13);
}

TEST(Residuals, LoadOffsetOfWrongSizeThrows) {
  Problem pb = problem(3, 3);
  pb.load_offset = Vec::Ones(3);
  const State z = zero_state(pb.sp());
  EXPECT_THROW(momentum_residual(z, z, 0.1, pb, 0.0), Error);
}

TEST(Residuals, DamageVanishesWithoutDrivingForces) {
  const Problem pb = problem(5, 3, inert_surface());
  const State st = testing_util::constant_state(pb, 1.0, 0.4);
  EXPECT_LE(max_abs(damage_residual(st, st, 0.1, pb)), 1e-13);
}

TEST(Residuals, EntropyVanishesAtUniformTemperature) {
  const Problem pb = problem(4, 4);
  const State st = testing_util::constant_state(pb, 0.8, 0.3);
  EXPECT_LE(max_abs(bulk_entropy_residual(st, st, 0.1, pb, 0.0)), 1e-13);
  EXPECT_LE(max_abs(surface_entropy_residual(st, st, 0.1, pb)), 1e-13);
}

TEST(Residuals, EntrySumsMatchScalarIdentities) {
  MaterialLaws m;
  m.latent.l2 = 0.4;
  SourceData src;
  src.h = ScalarExpr({ExprTerm{.c = 0.7, .kx = 2.0}});
  const Problem pb = problem(5, 4, m, src);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    const State prev = testing_util::random_state(pb, rng);
    const State st = testing_util::random_state(pb, rng);
    const double dt = 0.05;
    const auto d = scalar_identity_defects(st, prev, dt, pb, 0.3);
    EXPECT_NEAR(bulk_entropy_residual(st, prev, dt, pb, 0.3).sum(), d.bulk, 1e-11);
    EXPECT_NEAR(surface_entropy_residual(st, prev, dt, pb).sum(), d.surface, 1e-11);
  }
}

TEST(Energy, ZeroStateHasOnlyCohesion) {
  const Problem pb = problem(4, 4);
  const State z = zero_state(pb.sp());
  const auto e = free_energy(z, pb);
  EXPECT_EQ(e.mech, 0.0);
  EXPECT_EQ(e.imp, 0.0);
  EXPECT_EQ(e.th, 0.0);
  EXPECT_EQ(e.mass_th, 0.0);
  EXPECT_DOUBLE_EQ(e.adh, e.sigma_floor);
  EXPECT_NEAR(e.sigma_floor, pb.mat.cohesion.w * pb.forms.contact_length, 1e-14);
}

TEST(Energy, UniformPenetrationPenalty) {
  RegularizationParams rp;
  rp.mu = 0.5;
  const Problem pb = problem(4, 4, {}, {}, rp);
  State st = zero_state(pb.sp());
  st.u = testing_util::interp_w(pb.sp(), [](Point p) { return Point{0.0, p.y == 0.0 ? -1.0 : 0.0}; });
  const auto e = free_energy(st, pb);
  EXPECT_NEAR(e.imp, 1.0 / (2 * 0.5), 1e-14);
  st.u = -st.u;
  EXPECT_EQ(free_energy(st, pb).imp, 0.0);
}

TEST(Energy, ThermalMassIsTheIntegral) {
  const Problem pb = problem(4, 4);
  const State st = testing_util::constant_state(pb, 2.0, 0.5);
  EXPECT_NEAR(free_energy(st, pb).mass_th, 2.0 * (1.0 + 1.0), 1e-13);
}

TEST(Dissipation, VanishesAtRest) {
  const Problem pb = problem(4, 4);
  const State st = testing_util::constant_state(pb, 1.1, 0.2);
  const auto d = dissipation_rate(st, st, 0.1, pb);
  EXPECT_LE(d.total, 1e-26);
}

TEST(Dissipation, ComponentsAreNonNegativeAndSum) {
  const Problem pb = problem(4, 3);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    const State a = testing_util::random_state(pb, rng), b = testing_util::random_state(pb, rng);
    const auto d = dissipation_rate(b, a, 0.2, pb);
    for (double c : {d.grad_theta, d.visc, d.grad_theta_s, d.chi_t, d.exchange}) EXPECT_GE(c, 0.0);
    EXPECT_NEAR(d.total, d.grad_theta + d.visc + d.grad_theta_s + d.chi_t + d.exchange,
                1e-12 * d.total);
    const Vec ut = (b.u - a.u) / 0.2;
    EXPECT_NEAR(d.visc, ut.dot(pb.forms.b * ut), 1e-12 * d.visc);
  }
}

TEST(Jacobians, MatchFiniteDifferences) {
  MaterialLaws m;
  m.latent.l2 = 0.3;
  m.exchange.k1 = 0.4;
  const Problem pb = problem(3, 3, m);
  std::mt19937_64 rng(13);
  const double inv_dt = 5.0;
  for (int k = 0; k < 5; ++k) {
    const State prev = testing_util::random_state(pb, rng);
    const State st = testing_util::random_state(pb, rng);
    const Vec load = mechanical_load(pb, 0.0);

    const Eigen::MatrixXd ju = testing_util::fd_jacobian(
        [&](const Vec& u) { return momentum_kernel(u, prev.u, st.chi, st.theta, inv_dt, load, pb); },
        st.u);
    const Eigen::MatrixXd au(momentum_jacobian(st.u, st.chi, inv_dt, pb));
    EXPECT_LE((au - ju).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, au.cwiseAbs().maxCoeff()));

    const Eigen::MatrixXd jc = testing_util::fd_jacobian(
        [&](const Vec& c) { return damage_kernel(c, prev.chi, st.theta_s, st.u, inv_dt, pb); },
        st.chi);
    const Eigen::MatrixXd ac(damage_jacobian(st.chi, st.theta_s, st.u, inv_dt, pb));
    EXPECT_LE((ac - jc).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, ac.cwiseAbs().maxCoeff()));

    const Eigen::MatrixXd juc = testing_util::fd_jacobian(
        [&](const Vec& c) { return momentum_kernel(st.u, prev.u, c, st.theta, inv_dt, load, pb); },
        st.chi);
    const Eigen::MatrixXd auc(momentum_chi_coupling(st.u, st.chi, pb));
    EXPECT_LE((auc - juc).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, auc.cwiseAbs().maxCoeff()));

    const Vec hl = entropy_load(pb, 0.0);
    const int nv = pb.sp().n_v;
    Vec x(nv + pb.sp().n_s);
    x << st.theta, st.theta_s;
    const Eigen::MatrixXd jt = testing_util::fd_jacobian(
        [&](const Vec& y) {
          State s = st;
          s.theta = y.head(nv);
          s.theta_s = y.tail(pb.sp().n_s);
          return entropy_kernel(s, prev, inv_dt, hl, pb);
        },
        x);
    const Eigen::MatrixXd at(entropy_jacobian(st, inv_dt, pb));
    EXPECT_LE((at - jt).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, at.cwiseAbs().maxCoeff()));
  }
}

TEST(Jacobians, EntropyJacobianIsMonotone) {
  const Problem pb = problem(4, 4);
  std::mt19937_64 rng(14);
  const State st = testing_util::random_state(pb, rng);
  const Eigen::MatrixXd j(entropy_jacobian(st, 10.0, pb));
  const Eigen::MatrixXd sym = 0.5 * (j + j.transpose());
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().minCoeff(), -1e-10);
}

TEST(Gradient, DamageResidualIsTheEnergyGradient) {
  MaterialLaws m;
  m.latent.l2 = 0.2;
  const Problem pb = problem(4, 4, m);
  std::mt19937_64 rng(15);
  const State st = testing_util::random_state(pb, rng);
  const Vec g = damage_kernel(st.chi, st.chi, st.theta_s, st.u, 0.0, pb);
  const Eigen::MatrixXd fd = testing_util::fd_jacobian(
      [&](const Vec& c) {
        State s = st;
        s.chi = c;
        return Vec::Constant(1, surface_free_energy(s, pb));
      },
      st.chi, 1e-6);
  EXPECT_LE((fd.row(0).transpose() - g).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Loads, LimitOfSettlingData) {
  SourceData src;
  src.f.y = ScalarExpr({ExprTerm{.c = -0.2}, ExprTerm{.c = 0.5, .decay = 1.0}});
  const Problem pb = problem(3, 3, {}, src);
  SourceData lim;
  lim.f.y = ScalarExpr::constant(-0.2);
  const Problem pl = problem(3, 3, {}, lim);
  EXPECT_LE(max_abs(mechanical_load_limit(pb) - mechanical_load(pl, 0.0)), 1e-15);
  SourceData osc;
  osc.g.x = ScalarExpr({ExprTerm{.c = 1.0, .omega = 2.0}});
  EXPECT_THROW(mechanical_load_limit(problem(3, 3, {}, osc)), Error);
}

TEST(Materials, InvalidValuesAreRejected) {
  MaterialLaws m;
  m.lame_mu = -1.0;
  EXPECT_THROW(m.validate(), ConfigError);
  MaterialLaws e;
  e.exchange.floor = 0.0;
  EXPECT_THROW(e.validate(), ConfigError);
  RegularizationParams rp;
  rp.mu = -1.0;
  EXPECT_THROW(rp.yosida(), std::invalid_argument);
}
