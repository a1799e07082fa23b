// Serial reference kernels against their OpenMP counterparts. On a single
// core the two should be close; the gap shows the scheduling overhead.

#include <benchmark/benchmark.h>

#include "kheat/enumerate.hpp"
#include "kheat/heat.hpp"
#include "kheat/kahler.hpp"

using namespace kheat;

namespace {

void BM_EnumerateStable(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto graphs = parallel ? enumerate_stable(4) : serial::enumerate_stable(4);
    benchmark::DoNotOptimize(graphs);
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_EnumerateStable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EnumeratePointed(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto graphs = parallel ? enumerate_pointed_stable_strong(4) : serial::enumerate_pointed_stable_strong(4);
    benchmark::DoNotOptimize(graphs);
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_EnumeratePointed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Fresh cache each time, so phi of every Gamma_C is recomputed.
void BM_HeatCoefficient(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    PhiCache cache;
    auto a3 = parallel ? heat_coefficient(3, cache) : serial::heat_coefficient(3, cache);
    benchmark::DoNotOptimize(a3);
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_HeatCoefficient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ZCoefficient(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const auto g = tau_graph(7);
  for (auto _ : state) {
    PhiCache cache;
    auto z = parallel ? z_coefficient(g, cache) : serial::z_coefficient(g, cache);
    benchmark::DoNotOptimize(z);
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_ZCoefficient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Geometry(benchmark::State& state) {
  const auto exec = state.range(0) != 0 ? Execution::Parallel : Execution::Serial;
  const auto phi = KahlerPotential::random(2, 8, 1);
  for (auto _ : state) {
    KahlerGeometry geo(phi, exec);
    benchmark::DoNotOptimize(geo.scalar());
  }
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}
BENCHMARK(BM_Geometry)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EvaluateGraph(benchmark::State& state) {
  const auto exec = state.range(0) != 0 ? Execution::Parallel : Execution::Serial;
  const auto phi = KahlerPotential::random(3, 8, 1);
  const auto g = tau_graph(7);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_graph(g, phi, exec));
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}
BENCHMARK(BM_EvaluateGraph)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
