#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "thermoadh/diagnostics.hpp"
#include "thermoadh/error.hpp"
#include "thermoadh/stationary.hpp"
#include "thermoadh/stepper.hpp"

using namespace thermoadh;
using namespace thermoadh::diagnostics;
using testing_util::problem;

namespace {

EnergyLedger synthetic(double t_end, double dt, const std::function<void(LedgerRow&)>& fill) {
  EnergyLedger l;
  for (int k = 0; k * dt <= t_end + 1e-12; ++k) {
    LedgerRow r;
    r.t = k * dt;
    r.dt = dt;
    fill(r);
    l.append(r);
  }
  return l;
}

}  // namespace

TEST(Ledger, ColumnsMatchValues) {
  LedgerRow r;
  EXPECT_EQ(ledger_columns().size(), ledger_values(r).size());
  EXPECT_EQ(ledger_columns().front(), "t");
  for (const char* c : {"E_mech", "E_adh", "E_imp", "E_th", "L_total", "D_total", "min_theta",
                        "newton_iters"})
    EXPECT_NE(std::find(ledger_columns().begin(), ledger_columns().end(), c),
              ledger_columns().end())
        << c;
}

TEST(Ledger, TimesMustIncrease) {
  EnergyLedger l;
  LedgerRow r;
  r.t = 1.0;
  l.append(r);
  EXPECT_THROW(l.append(r), Error);
  r.t = 0.5;
  EXPECT_THROW(l.append(r), Error);
}

TEST(Ledger, RowsAreReproducibleAndConsistent) {
  SourceData src;
  src.h = ScalarExpr({ExprTerm{.c = 0.4, .decay = 2.0}});
  const auto pb = problem(4, 4, {}, src);
  std::mt19937_64 rng(21);
  const State prev = testing_util::random_state(pb, rng);
  stepper::StepReport rep;
  const State st = stepper::step(prev, 0.05, pb, {}, &rep);
  EnergyLedger a, b;
  ledger_append(a, st, prev, 0.05, pb, rep);
  ledger_append(b, st, prev, 0.05, pb, rep);
  EXPECT_EQ(ledger_values(a.back()), ledger_values(b.back()));

  const auto& row = a.back();
  const auto d = assembly::dissipation_rate(st, prev, 0.05, pb);
  EXPECT_NEAR(row.D_total, d.total, 1e-12 * std::max(1.0, d.total));
  EXPECT_NEAR(row.D_visc, d.visc, 1e-12 * std::max(1.0, d.visc));
  EXPECT_NEAR(row.D_chi_t, d.chi_t, 1e-12 * std::max(1.0, d.chi_t));
  const auto e = recompute_dissipation(st, prev, 0.05, pb);
  for (auto [x, y] : {std::pair{e.grad_theta, d.grad_theta}, {e.visc, d.visc},
                      {e.grad_theta_s, d.grad_theta_s}, {e.chi_t, d.chi_t},
                      {e.exchange, d.exchange}})
    EXPECT_NEAR(x, y, 1e-12 * std::max(1.0, y));

  for (double v : {row.E_mech, row.E_imp, row.E_th, row.D_total, row.ind_u_t, row.ind_chi_t,
                   row.ind_grad_theta, row.ind_grad_theta_s, row.ind_exchange, row.mean_gap})
    EXPECT_GE(v, 0.0);
  EXPECT_EQ(row.min_theta, st.theta.minCoeff());
  EXPECT_EQ(row.newton_iters, rep.newton_iters());
  EXPECT_NEAR(row.L_total, row.E_mech + row.E_adh + row.E_imp + row.E_th,
              1e-12 * std::abs(row.L_total));
}

TEST(EnergyLaw, FreeRunDecaysAndBalances) {
  const auto pb = problem(6, 6);
  State st = testing_util::constant_state(pb, 1.0, 0.5);
  st.theta = testing_util::interp_v(pb.sp(), [](Point p) { return 1.0 + 0.3 * std::cos(3.14159 * p.x); });
  st.chi.setConstant(0.8);
  refresh_aux(st, pb.sp(), pb.mat, pb.rp.yosida());
  EnergyLedger l;
  ledger_start(l, st, pb);
  stepper::Schedule s;
  s.t_end = 1.0;
  s.dt0 = 1e-2;
  s.dt_max = 1e-2;
  s.adaptive = false;
  stepper::run(st, s, pb, {}, [&](const State& a, const State& b, const stepper::StepReport& r) {
    ledger_append(l, a, b, r.dt, pb, r);
    return true;
  });
  const auto c = check_energy_law(l);
  EXPECT_LE(c.max_rel_uptick, 1e-8);
  EXPECT_GT(c.dissipated, 0.0);
  EXPECT_NEAR(c.balance_ratio, 1.0, 0.05);
}

TEST(Detector, FrozenLedgerIsFlagged) {
  const auto l = synthetic(10.0, 0.1, [](LedgerRow&) {});
  const auto r = detect_equilibrium(l, 2.0, 1e-6);
  EXPECT_TRUE(r.equilibrium);
  EXPECT_EQ(r.window, 2.0);
  EXPECT_NEAR(r.t_end, 10.0, 1e-12);
  for (double s : r.sup) EXPECT_EQ(s, 0.0);
}

TEST(Detector, PersistentOscillationIsNotFlagged) {
  const auto l = synthetic(20.0, 0.1, [](LedgerRow& r) {
    r.ind_grad_theta = 1e-3 * std::abs(std::sin(r.t));
  });
  const auto r = detect_equilibrium(l, 5.0, 1e-6);
  EXPECT_FALSE(r.equilibrium);
  EXPECT_GT(r.sup[2], 1e-4);
}

TEST(Detector, OnlyTheTrailingWindowCounts) {
  const auto l = synthetic(20.0, 0.1, [](LedgerRow& r) {
    r.ind_u_t = r.t < 10.0 ? 1.0 : 0.0;
    r.mean_gap = 1e-9;
  });
  const auto r = detect_equilibrium(l, 5.0, 1e-6);
  EXPECT_TRUE(r.equilibrium);
  EXPECT_EQ(r.mean_gap, 1e-9);
  EXPECT_FALSE(detect_equilibrium(l, 15.0, 1e-6).equilibrium);
}

TEST(Detector, ShortHistoryThrows) {
  const auto l = synthetic(1.0, 0.1, [](LedgerRow&) {});
  EXPECT_THROW(detect_equilibrium(l, 5.0, 1e-6), InsufficientHistory);
  EXPECT_THROW(detect_equilibrium(EnergyLedger{}, 1.0, 1e-6), InsufficientHistory);
}

TEST(Detector, IndicatorsFollowRowOrder) {
  LedgerRow r;
  r.ind_u_t = 1;
  r.ind_chi_t = 2;
  r.ind_grad_theta = 3;
  r.ind_grad_theta_s = 4;
  r.ind_exchange = 5;
  const auto v = indicators(r);
  for (int k = 0; k < kIndicatorCount; ++k) EXPECT_EQ(v[k], k + 1.0);
  EXPECT_EQ(indicator_names().size(), 5u);
}

TEST(Slopes, DecayingIndicatorsHaveNegativeSlope) {
  const auto l = synthetic(10.0, 0.1, [](LedgerRow& r) {
    r.ind_u_t = std::exp(-r.t);
    r.ind_chi_t = 1.0 / (1.0 + r.t);
  });
  const auto s = indicator_slopes(l, 0.5);
  EXPECT_LT(s[0], 0.0);
  EXPECT_LT(s[1], 0.0);
  EXPECT_EQ(s[2], 0.0);
}

TEST(Compare, DistancesToTheStationaryState) {
  const auto pb = problem(4, 4);
  State st = testing_util::constant_state(pb, 0.9, 0.5);
  const auto ss = stationary::from_state(st, 0.9);
  auto d = compare_to_stationary(st, ss, pb);
  for (double v : {d.theta_l2, d.theta_max, d.theta_s_l2, d.theta_s_max, d.u_l2, d.u_max,
                   d.chi_l2, d.chi_max})
    EXPECT_EQ(v, 0.0);
  st.chi.array() += 1e-3;
  st.theta.array() += 2e-3;
  d = compare_to_stationary(st, ss, pb);
  EXPECT_NEAR(d.chi_max, 1e-3, 1e-15);
  EXPECT_NEAR(d.chi_l2, 1e-3, 1e-14);  // contact length 1
  EXPECT_NEAR(d.theta_max, 2e-3, 1e-15);
  EXPECT_NEAR(d.theta_l2, 2e-3, 1e-14);
  const auto other = problem(3, 3);
  EXPECT_THROW(compare_to_stationary(testing_util::constant_state(other, 0.9, 0.5), ss, pb), Error);
}

TEST(DataNorm, ConstantLoadIntegratesLinearly) {
  SourceData src;
  src.h = ScalarExpr::constant(2.0);
  const auto pb = problem(3, 3, {}, src);
  const double one = data_norm(pb, 1.0);
  EXPECT_NEAR(one, assembly::entropy_load(pb, 0.0).norm(), 1e-14);
  EXPECT_NEAR(data_norm(pb, 3.0), 3.0 * one, 1e-12);
  EXPECT_EQ(data_norm(problem(3, 3), 3.0), 0.0);
}
