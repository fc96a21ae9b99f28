#include "sparsedom/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

namespace {

void check_depth(int depth) {
  if (depth > 24) throw std::invalid_argument("counterexample depth overflow");
}

// Adds scale * f onto block `index` of out, blocks having the length of f.
void place(std::vector<double>& out, const GridFunction& f, std::int64_t index, double scale) {
  const std::size_t n = f.size();
  const std::size_t lo = static_cast<std::size_t>(index) * n;
  for (std::size_t j = 0; j < n; ++j) out[lo + j] += scale * f[j];
}

double cube_average(const GridFunction& f, const Cube& q) {
  const auto& g = *f.grid;
  double s = 0.0;
  for (std::size_t x = g.leaf_begin(q); x < g.leaf_end(q); ++x) s += f[x] * g.leaf_measure(x);
  return s / g.measure(q);
}

}  // namespace

GridFunction build_RN(const GridFunction& f, int n_levels) {
  const int depth = f.grid->depth() + n_levels;
  check_depth(depth);
  auto g = build_grid(depth);
  std::vector<double> out(g->leaf_count(), 0.0);
  for (std::int64_t i = 0; i < (std::int64_t{1} << n_levels); ++i) place(out, f, i, 1.0);
  return GridFunction(g, std::move(out));
}

GridFunction build_TN(const GridFunction& f, int n_levels, double a) {
  if (n_levels < 3) throw std::invalid_argument("T_N needs N >= 3");
  const int df = f.grid->depth();
  const int depth = df + n_levels;
  check_depth(depth);
  auto g = build_grid(depth);
  std::vector<double> out(g->leaf_count(), 0.0);
  const std::int64_t last = (std::int64_t{1} << n_levels) - 3;
  for (std::int64_t k = 2; k <= last; ++k) place(out, f, k, (k % 2 == 0) ? a : -a);
  // [1 - 2^{-N+1}, 1): f at one level coarser, each value over two cells
  const std::size_t lo = g->leaf_count() - 2 * f.size();
  const double top = std::ldexp(1.0, n_levels - 1);
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[lo + 2 * j] += top * f[j];
    out[lo + 2 * j + 1] += top * f[j];
  }
  return GridFunction(g, std::move(out));
}

std::vector<Cube> d_prime(const Cube& j, int n_levels) {
  const std::int64_t count = std::int64_t{1} << n_levels;
  const std::int64_t half = count / 2;
  std::vector<Cube> out;
  for (std::int64_t i = 0; i < count; ++i) {
    if (i <= 1 || i == half || i == half + 1 || i >= count - 2) continue;
    out.push_back(Cube{j.level + n_levels, (j.index << n_levels) + i});
  }
  return out;
}

TNCheck check_TN(const GridFunction& f, const GridFunction& tf, int n_levels, double a) {
  TNCheck c;
  const double mean = cube_average(f, Cube{0, 0});
  c.property3 = cube_average(tf, Cube{0, 0}) == mean;
  for (int k = 1; k <= n_levels; ++k) c.property2 &= cube_average(tf, Cube{k, 0}) == 0.0;
  c.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& j : d_prime(Cube{0, 0}, n_levels)) {
    const double v = std::fabs(cube_average(tf, j));
    c.property1 &= v >= a * std::fabs(mean);
    if (mean != 0.0) c.min_ratio = std::min(c.min_ratio, v / std::fabs(mean));
  }
  return c;
}

CounterexampleResult counterexample_sequence(int n, int per_layer_n, double a, double c0) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  if (!(a >= 8.0 * c0)) throw std::invalid_argument("A must be at least 8 C0");
  check_depth(n * per_layer_n);
  GridFunction f = GridFunction::constant(build_grid(0), 1.0);
  for (int i = 0; i < n; ++i) f = build_TN(f, per_layer_n, a);
  CounterexampleResult res{f, {}};
  res.audit.n = n;
  const int depth = f.grid->depth();
  auto avg = all_level_averages(f);
  // I is forced since every <f>_{[0,2^-k)} with k >= 1 vanishes; then D'_N children above C0, recursively.
  std::vector<Cube> stack{Cube{0, 0}};
  while (!stack.empty()) {
    Cube q = stack.back();
    stack.pop_back();
    res.audit.forced.push_back(q);
    if (q.level + per_layer_n > depth) continue;
    for (const auto& j : d_prime(q, per_layer_n))
      if (std::fabs(avg[j.level][j.index]) > c0) stack.push_back(j);
  }
  std::sort(res.audit.forced.begin(), res.audit.forced.end());
  double worst = 1.0;
  for (const auto& q : res.audit.forced) {
    double inside = 0.0;
    for (const auto& p : res.audit.forced)
      if (q.contains(p)) inside += p.length();
    worst = std::max(worst, inside / q.length());
  }
  res.audit.carleson = worst;
  res.audit.best_sparsity = 1.0 / worst;
  return res;
}

}  // namespace sparsedom
