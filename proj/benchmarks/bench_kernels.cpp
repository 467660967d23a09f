#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "thermoadh/assembly.hpp"
#include "thermoadh/proximal.hpp"
#include "thermoadh/stepper.hpp"

using namespace thermoadh;

namespace {

assembly::Problem make(int n) {
  auto sp = std::make_shared<const mesh::Spaces>(mesh::build_rect_spaces(n, n));
  SourceData src;
  src.f.y = ScalarExpr::constant(-0.1);
  return assembly::make_problem(sp, {}, src, {});
}

State start(const assembly::Problem& pb) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(0.8, 1.2), c(0.2, 0.8);
  State st = zero_state(pb.sp());
  for (auto& x : st.theta) x = th(rng);
  for (auto& x : st.theta_s) x = th(rng);
  for (auto& x : st.chi) x = c(rng);
  refresh_aux(st, pb.sp(), pb.mat, pb.rp.yosida());
  return st;
}

void BM_ResolventLn(benchmark::State& state) {
  const prox::YosidaParam p(1e-2);
  double x = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prox::ln_mu_eval(p, x));
    x = x > 5.0 ? -5.0 : x + 1e-3;
  }
}
BENCHMARK(BM_ResolventLn);

void BM_IMuClosed(benchmark::State& state) {
  const prox::IMu imu(prox::YosidaParam(1e-2));
  double x = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(imu(x));
    x = x > 5.0 ? -5.0 : x + 1e-3;
  }
}
BENCHMARK(BM_IMuClosed);

void BM_IMuQuadrature(benchmark::State& state) {
  const prox::YosidaParam p(1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(prox::i_mu(p, 3.7));
}
BENCHMARK(BM_IMuQuadrature);

void BM_ConstantForms(benchmark::State& state) {
  const auto sp = mesh::build_rect_spaces(static_cast<int>(state.range(0)),
                                          static_cast<int>(state.range(0)));
  const MaterialLaws mat;
  for (auto _ : state) benchmark::DoNotOptimize(assembly::assemble_constant_forms(sp, mat));
}
BENCHMARK(BM_ConstantForms)->Arg(16)->Arg(32);

void BM_Residuals(benchmark::State& state) {
  const auto pb = make(static_cast<int>(state.range(0)));
  const State st = start(pb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assembly::momentum_residual(st, st, 0.1, pb, 0.0));
    benchmark::DoNotOptimize(assembly::damage_residual(st, st, 0.1, pb));
    benchmark::DoNotOptimize(assembly::bulk_entropy_residual(st, st, 0.1, pb, 0.0));
    benchmark::DoNotOptimize(assembly::surface_entropy_residual(st, st, 0.1, pb));
  }
}
BENCHMARK(BM_Residuals)->Arg(16)->Arg(32);

void BM_Step(benchmark::State& state) {
  const auto pb = make(static_cast<int>(state.range(0)));
  const State st = start(pb);
  for (auto _ : state) benchmark::DoNotOptimize(stepper::step(st, 0.05, pb, {}));
}
BENCHMARK(BM_Step)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
