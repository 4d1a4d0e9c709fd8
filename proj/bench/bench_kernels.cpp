// Serial reference kernels against their OpenMP counterparts.
// Run with --benchmark_counters_tabular=true for a compact table.

#include <benchmark/benchmark.h>

#include "halforthant/chemdist.hpp"
#include "halforthant/dual2d.hpp"
#include "halforthant/parallel.hpp"

using namespace ho;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_Bfs(benchmark::State& state) {
  const auto h = static_cast<std::uint32_t>(state.range(1));
  const Environment env(EnvConfig{2, 0.5, static_cast<std::int32_t>(h), 42});
  for (auto _ : state) {
    auto f = bfs_distances(env, Point{0, 0}, h, mode(state));
    benchmark::DoNotOptimize(f.values().data());
  }
  state.counters["threads"] = state.range(0) ? max_threads() : 1;
}
BENCHMARK(BM_Bfs)->ArgsProduct({{0, 1}, {250, 1000}})->Unit(benchmark::kMillisecond);

void BM_Bitmap(benchmark::State& state) {
  const Box box = Box::cube(Point{0, 0}, static_cast<std::int32_t>(state.range(1)));
  for (auto _ : state) {
    SiteBitmap b(box, 7, 0.5, mode(state));
    benchmark::DoNotOptimize(&b);
  }
}
BENCHMARK(BM_Bitmap)->ArgsProduct({{0, 1}, {500, 2000}})->Unit(benchmark::kMillisecond);

void BM_ClusterFanOut(benchmark::State& state) {
  for (auto _ : state) {
    auto t = cluster_tail(0.45, 3, static_cast<std::uint64_t>(state.range(1)), 10000, mode(state));
    benchmark::DoNotOptimize(t.sizes.data());
  }
}
BENCHMARK(BM_ClusterFanOut)->ArgsProduct({{0, 1}, {2000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
