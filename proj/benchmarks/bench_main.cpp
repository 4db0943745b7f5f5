#include <benchmark/benchmark.h>

#include "sglab/backlund.hpp"
#include "sglab/evolution.hpp"
#include "sglab/numerics.hpp"
#include "sglab/perturb.hpp"
#include "sglab/profiles.hpp"

namespace {

using namespace sg;

const Grid kG(40.0, 4096);
const SolitonParams kP(0.5, 0.3, -0.1);

void BM_differentiate(benchmark::State& state) {
  const Field f = Field::sample(kG, [](double x) { return std::exp(-0.1 * x * x); });
  for (auto _ : state) benchmark::DoNotOptimize(differentiate(f));
}
BENCHMARK(BM_differentiate);

void BM_integrate(benchmark::State& state) {
  const Field f = Field::sample(kG, [](double x) { return 1.0 / std::cosh(x); });
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f));
}
BENCHMARK(BM_integrate);

void BM_eval_breather(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_profile(ProfileKind::Breather, kP, kG));
}
BENCHMARK(BM_eval_breather);

void BM_bt_residual(benchmark::State& state) {
  const FieldPair B = eval_profile(ProfileKind::Breather, kP, kG);
  const FieldPair K = eval_profile(ProfileKind::ComplexKink, kP, kG);
  const BTParameter a = BTParameter::breather_ascent(kP);
  for (auto _ : state) benchmark::DoNotOptimize(bt_residual(B, K, a));
}
BENCHMARK(BM_bt_residual);

void BM_descend_breather(benchmark::State& state) {
  const FieldPair zw = random_bump_pair(kG, 1e-3, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(descend_breather(zw.phi, zw.phi_t, kP));
}
BENCHMARK(BM_descend_breather)->Unit(benchmark::kMillisecond);

void BM_evolve_unit_time(benchmark::State& state) {
  EvolvingState init;
  init.background = exact_solution(ProfileKind::Breather, kP);
  init.pert = random_bump_pair(kG, 1e-3, 2);
  const double dt = 0.25 * kG.h();
  for (auto _ : state)
    benchmark::DoNotOptimize(evolve(init, 1.0, dt, {1.0}));
}
BENCHMARK(BM_evolve_unit_time)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
