#include <benchmark/benchmark.h>

#include "sparsedom/biparam.hpp"
#include "sparsedom/extract.hpp"
#include "sparsedom/io.hpp"

using namespace sparsedom;

static void BM_ExtractLayered(benchmark::State& state) {
  auto f = generate_function("random-heavy", static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(extract_layered(f));
}
BENCHMARK(BM_ExtractLayered)->DenseRange(8, 14, 2);

static void BM_ExtractStopping(benchmark::State& state) {
  auto f = generate_function("random-heavy", static_cast<int>(state.range(0)), 7);
  auto sigma = PredictableSigns::rademacher(f.grid, 7);
  for (auto _ : state) benchmark::DoNotOptimize(extract_stopping(f, StoppingOperator::transform, sigma));
}
BENCHMARK(BM_ExtractStopping)->DenseRange(6, 10, 2);

static void BM_GreedyRectangles(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ProductGrid pg{n, n};
  std::vector<double> f(pg.cells());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>((i * 7919) % 2001) - 1000.0;
  auto e = rectangle_family(pg, f);
  for (auto _ : state) benchmark::DoNotOptimize(extract_greedy(e));
  state.counters["rectangles"] = static_cast<double>(e.sets.size());
}
BENCHMARK(BM_GreedyRectangles)->DenseRange(3, 6, 1)->Unit(benchmark::kMillisecond);

static void BM_VerifySparsity(benchmark::State& state) {
  auto g = build_grid(static_cast<int>(state.range(0)));
  auto s = random_sparse_family(g, 11, Ratio{1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(verify_sparsity(s, Ratio{1, 2}));
}
BENCHMARK(BM_VerifySparsity)->DenseRange(8, 14, 2);
