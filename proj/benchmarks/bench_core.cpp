#include <benchmark/benchmark.h>

#include "kanlab/certify.hpp"
#include "kanlab/jacobian.hpp"
#include "kanlab/kernels.hpp"
#include "kanlab/maps.hpp"
#include "kanlab/rng.hpp"

using namespace kanlab;

namespace {

const KanSystem& desk_system() {
  static KanSystem sys = [] {
    SystemParams p = desk_preset();
    return KanSystem(p);
  }();
  return sys;
}

MPoint random_point(CounterRng& rng) {
  return {TorusPoint{rng.uniform(), rng.uniform()},
          CirclePoint{rng.uniform(0.0, 2.0)},
          TorusPoint{rng.uniform(), rng.uniform()}};
}

}  // namespace

static void BM_KernelQ(benchmark::State& state) {
  BumpProfile bump(0.03);
  CounterRng rng(1, 0);
  double a = rng.uniform(-0.03, 0.03), b = rng.uniform(-0.03, 0.03);
  double c = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_eval(a, b, c, bump));
    c += 1e-6;
  }
}
BENCHMARK(BM_KernelQ);

static void BM_MapStepF(benchmark::State& state) {
  const KanSystem& sys = desk_system();
  CounterRng rng(2, 0);
  MPoint p = random_point(rng);
  for (auto _ : state) {
    p = sys.f(p);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_MapStepF);

static void BM_MapStepFtilde(benchmark::State& state) {
  const KanSystem& sys = desk_system();
  CounterRng rng(3, 0);
  MPoint p = random_point(rng);
  for (auto _ : state) {
    p = sys.ftilde(p);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_MapStepFtilde);

static void BM_FactorStepG(benchmark::State& state) {
  const KanSystem& sys = desk_system();
  CounterRng rng(4, 0);
  GPoint q{TorusPoint{rng.uniform(), rng.uniform()}, CirclePoint{0.0}};
  for (auto _ : state) {
    q = sys.g(q);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_FactorStepG);

static void BM_Jacobian(benchmark::State& state) {
  const KanSystem& sys = desk_system();
  JacobianEvaluator jac(sys);
  CounterRng rng(5, 0);
  MPoint p = random_point(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jac.df(p));
    p = sys.f(p);
  }
}
BENCHMARK(BM_Jacobian);

static void BM_TsMultiplierOrbit(benchmark::State& state) {
  const KanSystem& sys = desk_system();
  JacobianEvaluator jac(sys);
  GPoint q{TorusPoint{0.123, 0.456}, CirclePoint{0.0}};
  double acc = 0;
  for (auto _ : state) {
    acc += std::log(jac.ts_multiplier(q));
    q = sys.g(q);
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_TsMultiplierOrbit);

static void BM_SymmetryIntegral(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(symmetry_integral(0.03, 4001));
}
BENCHMARK(BM_SymmetryIntegral);

BENCHMARK_MAIN();
