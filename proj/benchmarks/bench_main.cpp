#include <benchmark/benchmark.h>

#include "spinmarket/dynamics.hpp"
#include "spinmarket/meanfield.hpp"
#include "spinmarket/random.hpp"

using namespace spinmarket;

namespace {

RunConfig bench_config(SpinSpace spin, UpdateMode mode) {
  RunConfig c;
  c.graph = std::make_shared<const NeighborGraph>(build_fcc(12));
  c.params.spin = spin;
  c.params.a = 3;
  c.params.global_scale = 1.0 / 144;
  c.params.T = 6.7;
  c.init = {0.4, 0.6};
  c.seed = 1;
  c.mode = mode;
  return c;
}

void sweep(benchmark::State& state, SpinSpace spin, UpdateMode mode) {
  const RunConfig c = bench_config(spin, mode);
  MarketState st = init_state(c);
  const auto stream = derive_seed(c.seed, "sweep");
  for (auto _ : state) {
    metropolis_sweep(st, *c.graph, c.params, 0.0, stream, mode);
    benchmark::DoNotOptimize(st.magnetization());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(st.size()));
}

void BM_SweepThreeStateSnapshot(benchmark::State& s) { sweep(s, SpinSpace::discrete(1), UpdateMode::snapshot); }
void BM_SweepThreeStateInPlace(benchmark::State& s) { sweep(s, SpinSpace::discrete(1), UpdateMode::in_place); }
void BM_SweepContinuousSnapshot(benchmark::State& s) { sweep(s, SpinSpace::continuous(), UpdateMode::snapshot); }

void BM_TotalEnergy(benchmark::State& state) {
  const RunConfig c = bench_config(SpinSpace::discrete(1), UpdateMode::snapshot);
  const MarketState st = init_state(c);
  for (auto _ : state) benchmark::DoNotOptimize(total_energy(st, *c.graph, c.params, 0.1));
}

void BM_RunMarket(benchmark::State& state) {
  RunConfig c = bench_config(SpinSpace::discrete(1), UpdateMode::snapshot);
  c.n_sweeps = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run_market(c).rows.back().P);
  state.SetItemsProcessed(state.iterations() * c.n_sweeps * static_cast<long>(c.graph->size()));
}

void BM_Brillouin(benchmark::State& state) {
  double u = -5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(brillouin(u, 1));
    u = u > 5 ? -5 : u + 1e-3;
  }
}

void BM_MeanFieldRun(benchmark::State& state) {
  MeanFieldParams p;
  p.T = 10.82;
  for (auto _ : state) benchmark::DoNotOptimize(mf_run(p, 2000).rows.back().s1);
}

}  // namespace

BENCHMARK(BM_SweepThreeStateSnapshot)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepThreeStateInPlace)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepContinuousSnapshot)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TotalEnergy)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RunMarket)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Brillouin);
BENCHMARK(BM_MeanFieldRun)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
