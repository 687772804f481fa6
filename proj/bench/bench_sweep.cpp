// Serial reference vs OpenMP sweep on a (Delta, Omega0) squeezing grid.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "nanopair/scan/sweep.hpp"

namespace {

nanopair::scan::SweepConfig grid_config(int n) {
  auto cfg = nanopair::scan::parse_config(
      "gamma_over_gamma0 = 2.9\ngamma12_over_gamma0 = -2.6\nomega12_over_gamma0 = -6.4\nf = 2\n"
      "delta_over_gamma0 = 400\ndetuning_min_over_gamma0 = -30\ndetuning_max_over_gamma0 = 30\n"
      "rabi_max_over_gamma0 = 150\nobservables = fluorescence,concurrence,variance\n");
  cfg.detuning.count = n;
  cfg.rabi.count = n;
  return cfg;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = grid_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nanopair::scan::run_sweep_serial(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_SweepOpenMP(benchmark::State& state) {
  const auto cfg = grid_config(static_cast<int>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nanopair::scan::run_sweep(cfg, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
  state.counters["threads"] = threads;
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int max_threads = omp_get_max_threads();
  for (int n : {21, 61})
    for (int t = 1; t <= max_threads; t *= 2) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(21)->Arg(61)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOpenMP)->Apply(thread_args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
