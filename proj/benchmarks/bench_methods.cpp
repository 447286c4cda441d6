#include <benchmark/benchmark.h>

#include "kingman/contour.hpp"
#include "kingman/dist_api.hpp"
#include "kingman/oracle.hpp"
#include "kingman/series.hpp"

using namespace kingman;

// Arguments: n, 1/t.
static void BM_Series(benchmark::State& state) {
  const ModelParams p(1.0, 1.0 / static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pmf_series(state.range(0), p).value);
}
BENCHMARK(BM_Series)->Args({5, 1})->Args({40, 10})->Args({100, 50})->Args({200, 100})->Unit(benchmark::kMicrosecond);

static void BM_Line(benchmark::State& state) {
  const ModelParams p(1.0, 1.0 / static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pmf_line_integral(state.range(0), p).value);
}
BENCHMARK(BM_Line)->Args({5, 1})->Args({40, 10})->Args({100, 50})->Args({200, 100})->Unit(benchmark::kMicrosecond);

static void BM_Circle(benchmark::State& state) {
  const ModelParams p(1.0, 1.0 / static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pmf_circle(state.range(0), p).value);
}
BENCHMARK(BM_Circle)->Args({5, 1})->Args({40, 10})->Args({100, 50})->Args({200, 100})->Unit(benchmark::kMicrosecond);

static void BM_Steep(benchmark::State& state) {
  const ModelParams p(1.0, 1.0 / static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pmf_steep(state.range(0), p).value);
}
BENCHMARK(BM_Steep)->Args({40, 20})->Args({200, 100})->Unit(benchmark::kMicrosecond);

static void BM_Table(benchmark::State& state) {
  const ModelParams p(1.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(pmf_table(p, state.range(0)).normalization_defect);
}
BENCHMARK(BM_Table)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Ode(benchmark::State& state) {
  const ModelParams p(1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ode_distribution(state.range(0), p).back());
}
BENCHMARK(BM_Ode)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const ModelParams p(1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mc_histogram(p, state.range(0), 1).counts.size());
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
