#include <benchmark/benchmark.h>

#include "hexnls/analytic_forms.hpp"
#include "hexnls/functionals.hpp"
#include "hexnls/solver.hpp"

using namespace hexnls;

static void BM_BuildHoneycomb(benchmark::State& state) {
  const int R = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_honeycomb(R, 1.0));
}
BENCHMARK(BM_BuildHoneycomb)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_DecomposePaths(benchmark::State& state) {
  const HoneycombLattice lat = build_honeycomb(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_paths(lat));
}
BENCHMARK(BM_DecomposePaths)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Energy(benchmark::State& state) {
  const HoneycombLattice lat = build_honeycomb(static_cast<int>(state.range(0)), 1.0);
  const GraphFunction u = trial_function(lat, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(energy(u, 5.0));
  state.SetItemsProcessed(state.iterations() * u.num_dofs());
}
BENCHMARK(BM_Energy)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

static void BM_InequalityRatio(benchmark::State& state) {
  const HoneycombLattice lat = build_honeycomb(10, 1.0);
  const GraphFunction u = corpus_function(lat.graph, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(inequality_ratio(u, InequalityKind::gn_interp, 5.0));
}
BENCHMARK(BM_InequalityRatio)->Unit(benchmark::kMicrosecond);

static void BM_MinimizeLineSoliton(benchmark::State& state) {
  auto g = std::make_shared<const MetricGraph>(build_line(30.0));
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(g, 4.0, 2.0, cfg, Initializer::soliton_bump));
}
BENCHMARK(BM_MinimizeLineSoliton)->Unit(benchmark::kMillisecond);

static void BM_MinimizeHoneycomb(benchmark::State& state) {
  const HoneycombLattice lat = build_honeycomb(static_cast<int>(state.range(0)), 1.0);
  SolverConfig cfg;
  cfg.samples_per_edge = 9;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(lat.graph, 3.0, 1.0, cfg));
}
BENCHMARK(BM_MinimizeHoneycomb)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_SqueezedProbes(benchmark::State& state) {
  const HoneycombLattice lat = build_honeycomb(8, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(demonstrate_unbounded(lat, 10.0, {1.0, 0.5, 0.25, 0.125}));
}
BENCHMARK(BM_SqueezedProbes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
