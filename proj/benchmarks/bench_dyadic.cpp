#include <benchmark/benchmark.h>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/haar_shift.hpp"
#include "sparsedom/io.hpp"
#include "sparsedom/martingale.hpp"

using namespace sparsedom;

static void BM_DoobMaximal(benchmark::State& state) {
  auto f = generate_function("random-signed", static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(doob_maximal(f));
  state.SetComplexityN(static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_DoobMaximal)->DenseRange(8, 16, 4)->Complexity();

static void BM_PercentileMaximal(benchmark::State& state) {
  auto f = generate_function("random-signed", static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(percentile_maximal(f, Ratio{1, 4}));
  state.SetComplexityN(static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_PercentileMaximal)->DenseRange(8, 16, 4)->Complexity();

static void BM_TransformMaxTrunc(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto f = generate_function("random-heavy", n, 3);
  auto sigma = PredictableSigns::rademacher(f.grid, 3);
  for (auto _ : state) benchmark::DoNotOptimize(transform_max_trunc(f, sigma));
}
BENCHMARK(BM_TransformMaxTrunc)->DenseRange(8, 16, 4);

static void BM_ApplyShift(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto f = generate_function("random-signed", n, 2);
  auto spec = HaarShiftSpec::random(n, 1, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_shift(f, spec));
}
BENCHMARK(BM_ApplyShift)->DenseRange(8, 14, 2);

BENCHMARK_MAIN();
