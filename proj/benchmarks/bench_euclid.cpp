#include <benchmark/benchmark.h>

#include "sparsedom/cz.hpp"
#include "sparsedom/line.hpp"
#include "sparsedom/smooth_maximal.hpp"
#include "sparsedom/weights.hpp"

using namespace sparsedom;

namespace {

LineFunction steps(std::size_t cells) {
  LineFunction f(LineGrid(-2.0, 2.0, cells));
  for (int k = 0; k < 16; ++k) f.add_indicator(k / 16.0, (k + 1) / 16.0, ((k * 37) % 11) - 5.0);
  return f;
}

}  // namespace

static void BM_HilbertTransform(benchmark::State& state) {
  auto f = steps(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_transform(f));
}
BENCHMARK(BM_HilbertTransform)->RangeMultiplier(2)->Range(256, 4096);

static void BM_SmoothMaximal(benchmark::State& state) {
  auto f = steps(static_cast<std::size_t>(state.range(0)));
  SmoothBumpDictionary d(1.0, 8);
  for (auto _ : state) benchmark::DoNotOptimize(smooth_maximal(f, d));
}
BENCHMARK(BM_SmoothMaximal)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);

static void BM_CzoExtract(benchmark::State& state) {
  auto f = steps(static_cast<std::size_t>(state.range(0)));
  SmoothBumpDictionary d(1.0, 8);
  auto k = CZKernelSpec::hilbert(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(czo_extract_sparse(f, k, d, 0.0, 1.0));
}
BENCHMARK(BM_CzoExtract)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_AqAllIntervals(benchmark::State& state) {
  auto w = Weight::power(1.0 / 64);
  for (auto _ : state)
    benchmark::DoNotOptimize(aq_characteristic(w, 2.0, CubeFamily::all_intervals, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AqAllIntervals)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
