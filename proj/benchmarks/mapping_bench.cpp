#include <benchmark/benchmark.h>

#include <random>

#include "sparsemap/driver.hpp"
#include "sparsemap/mis.hpp"

using namespace sparsemap;

namespace {

SparseBlock big_block() { return generate_block(8, 8, 0.48, 1000, "b").value(); }

SparseBlock micro_block() {
  SparseBlock b;
  b.name = "fanout5";
  b.channels = 2;
  b.kernels = 5;
  b.mask = {{1, 1, 1, 1, 1}, {0, 0, 0, 0, 1}};
  return b;
}

BitMatrix random_graph(int n, double density, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  BitMatrix m(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng) < density) m.set(a, b);
  return m;
}

void BM_Lowering(benchmark::State& state) {
  SparseBlock b = big_block();
  for (auto _ : state) benchmark::DoNotOptimize(build_sdfg(b));
}
BENCHMARK(BM_Lowering);

void BM_ScheduleSparse(benchmark::State& state) {
  Sdfg g = build_sdfg(big_block()).value();
  CgraConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(schedule_loop(g, cfg, SchedulerOptions{}));
}
BENCHMARK(BM_ScheduleSparse);

void BM_ScheduleBaseline(benchmark::State& state) {
  Sdfg g = build_sdfg(big_block()).value();
  CgraConfig cfg;
  SchedulerOptions opts;
  opts.baseline_mode = true;
  for (auto _ : state) benchmark::DoNotOptimize(schedule_loop(g, cfg, opts));
}
BENCHMARK(BM_ScheduleBaseline);

// Full pipeline including binding retries on the smallest block that maps.
void BM_MapMicroBlock(benchmark::State& state) {
  Sdfg g = build_sdfg(micro_block()).value();
  CgraConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(map_with_retries(g, cfg, SchedulerOptions{}, BinderOptions{}));
}
BENCHMARK(BM_MapMicroBlock);

void BM_MisExact(benchmark::State& state) {
  BitMatrix adj = random_graph(int(state.range(0)), 0.5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_mis_exact(adj));
}
BENCHMARK(BM_MisExact)->Arg(20)->Arg(28);

void BM_MisTabu(benchmark::State& state) {
  BitMatrix adj = random_graph(int(state.range(0)), 0.3, 3);
  MisOptions opts;
  opts.iterations = 20000;
  for (auto _ : state) benchmark::DoNotOptimize(solve_mis_tabu(adj, opts));
}
BENCHMARK(BM_MisTabu)->Arg(40)->Arg(80);

}  // namespace

BENCHMARK_MAIN();
