#include "sparsedom/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsedom {

namespace {

void check_level(const GridFunction& f, int k) {
  if (k < 0 || k > f.grid->depth()) throw std::out_of_range("level out of range");
}

std::vector<double> level_sums(const GridFunction& f, int k) {
  const auto& g = *f.grid;
  std::vector<double> cur(f.size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = f.values[i] * g.leaf_measure(i);
  for (int lev = g.depth(); lev > k; --lev) {
    std::vector<double> up(cur.size() / 2);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] = cur[2 * i] + cur[2 * i + 1];
    cur.swap(up);
  }
  return cur;
}

}  // namespace

std::vector<double> level_averages(const GridFunction& f, int k) {
  check_level(f, k);
  auto s = level_sums(f, k);
  const auto& m = f.grid->level_measures(k);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] /= m[i];
  return s;
}

std::vector<std::vector<double>> all_level_averages(const GridFunction& f) {
  const auto& g = *f.grid;
  const int n = g.depth();
  std::vector<std::vector<double>> sums(n + 1);
  sums[n].resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sums[n][i] = f.values[i] * g.leaf_measure(i);
  for (int k = n - 1; k >= 0; --k) {
    sums[k].resize(g.cubes_at(k));
    for (std::size_t i = 0; i < sums[k].size(); ++i) sums[k][i] = sums[k + 1][2 * i] + sums[k + 1][2 * i + 1];
  }
  for (int k = 0; k <= n; ++k) {
    const auto& m = g.level_measures(k);
    for (std::size_t i = 0; i < sums[k].size(); ++i) sums[k][i] /= m[i];
  }
  // Leaf level: keep the original values (avoids mass round trips).
  sums[n] = f.values;
  return sums;
}

GridFunction broadcast(const GridPtr& g, int k, const std::vector<double>& cube_values) {
  std::vector<double> out(g->leaf_count());
  const int shift = g->depth() - k;
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = cube_values[x >> shift];
  return GridFunction(g, std::move(out));
}

GridFunction cond_expect(const GridFunction& f, int k) {
  check_level(f, k);
  if (k == f.grid->depth()) return f;
  return broadcast(f.grid, k, level_averages(f, k));
}

GridFunction mart_diff(const GridFunction& f, int k) {
  check_level(f, k);
  GridFunction e = cond_expect(f, k);
  if (k == 0) return e;
  GridFunction prev = cond_expect(f, k - 1);
  for (std::size_t i = 0; i < e.size(); ++i) e.values[i] -= prev.values[i];
  return e;
}

double percentile_of(std::vector<std::pair<double, double>>& vm, double total, Ratio r) {
  if (!r.valid_probability()) throw std::invalid_argument("ratio must lie in (0,1)");
  if (vm.empty()) return 0.0;
  std::sort(vm.begin(), vm.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double above = 0.0;
  double answer = vm.front().first;
  std::size_t i = 0;
  while (i < vm.size()) {
    double v = vm[i].first;
    if (!r.admits(above, total)) break;
    answer = v;
    while (i < vm.size() && vm[i].first == v) above += vm[i++].second;
  }
  return answer;
}

double percentile_uniform(std::vector<double>& values, Ratio r) {
  if (!r.valid_probability()) throw std::invalid_argument("ratio must lie in (0,1)");
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end(), std::greater<>());
  const double total = static_cast<double>(values.size());
  double answer = values.front();
  std::size_t i = 0;
  while (i < values.size()) {
    double v = values[i];
    if (!r.admits(static_cast<double>(i), total)) break;
    answer = v;
    while (i < values.size() && values[i] == v) ++i;
  }
  return answer;
}

double percentile_on_cube(const GridFunction& f, const Cube& q, Ratio r) {
  const auto& g = *f.grid;
  if (q.level < 0 || q.level > g.depth() || q.index < 0 || q.index >= (std::int64_t{1} << q.level))
    throw std::out_of_range("cube outside grid");
  const std::size_t lo = g.leaf_begin(q), hi = g.leaf_end(q);
  if (g.uniform()) {
    std::vector<double> v(f.values.begin() + lo, f.values.begin() + hi);
    return percentile_uniform(v, r);
  }
  std::vector<std::pair<double, double>> vm;
  vm.reserve(hi - lo);
  for (std::size_t x = lo; x < hi; ++x) vm.emplace_back(f.values[x], g.leaf_measure(x));
  return percentile_of(vm, g.measure(q), r);
}

GridFunction cond_percentile(const GridFunction& f, int k, Ratio r) {
  check_level(f, k);
  if (!r.valid_probability()) throw std::invalid_argument("ratio must lie in (0,1)");
  if (k == f.grid->depth()) return f;
  std::vector<double> per(f.grid->cubes_at(k));
  for (std::size_t i = 0; i < per.size(); ++i) per[i] = percentile_on_cube(f, Cube{k, static_cast<std::int64_t>(i)}, r);
  return broadcast(f.grid, k, per);
}

GridFunction stopped_percentile(const GridFunction& f, const StoppingTime& nu, Ratio r) {
  require_same_grid(f.grid, nu.grid);
  const auto& g = *f.grid;
  GridFunction out = GridFunction::zeros(f.grid);
  for (std::size_t x = 0; x < f.size();) {
    int k = nu.level[x];
    if (k == kInfLevel) {
      ++x;
      continue;
    }
    Cube q{k, g.ancestor(x, k)};
    double p = percentile_on_cube(f, q, r);
    std::size_t end = g.leaf_end(q);
    for (std::size_t y = g.leaf_begin(q); y < end; ++y) out.values[y] = p;
    x = end;
  }
  return out;
}

GridFunction doob_maximal(const GridFunction& f, int start, int stop) {
  return doob_maximal(f, StoppingTime::constant(f.grid, start), stop);
}

GridFunction doob_maximal(const GridFunction& f, const StoppingTime& start, int stop) {
  require_same_grid(f.grid, start.grid);
  const auto& g = *f.grid;
  const int n = g.depth();
  if (stop < 0) stop = n;
  if (stop > n) throw std::out_of_range("stop level out of range");
  auto avg = all_level_averages(f);
  GridFunction out = GridFunction::zeros(f.grid);
  for (std::size_t x = 0; x < f.size(); ++x) {
    int s = start.level[x];
    if (s == kInfLevel) continue;
    double m = 0.0;
    for (int k = s; k <= stop; ++k) m = std::max(m, std::fabs(avg[k][g.ancestor(x, k)]));
    out.values[x] = m;
  }
  return out;
}

GridFunction percentile_maximal(const GridFunction& f, Ratio r, int stop) {
  const int n = f.grid->depth();
  if (stop < 0) stop = n;
  if (stop > n) throw std::out_of_range("stop level out of range");
  GridFunction a = f.abs();
  GridFunction out = GridFunction::zeros(f.grid);
  for (int k = 0; k <= stop; ++k) {
    GridFunction p = cond_percentile(a, k, r);
    for (std::size_t x = 0; x < out.size(); ++x) out.values[x] = std::max(out.values[x], p.values[x]);
  }
  return out;
}

std::vector<double> local_maximal(const GridFunction& f, const Cube& q) {
  const auto& g = *f.grid;
  const std::size_t lo = g.leaf_begin(q), hi = g.leaf_end(q);
  const int levels = g.depth() - q.level;
  // Bottom-up sums inside q; running max top-down.
  std::vector<std::vector<double>> avg(levels + 1);
  avg[levels].assign(f.values.begin() + lo, f.values.begin() + hi);
  std::vector<double> mass(g.leaf_measures().begin() + lo, g.leaf_measures().begin() + hi);
  std::vector<double> sums(hi - lo);
  for (std::size_t i = 0; i < sums.size(); ++i) sums[i] = avg[levels][i] * mass[i];
  for (int j = levels - 1; j >= 0; --j) {
    std::vector<double> s2(sums.size() / 2), m2(mass.size() / 2);
    avg[j].resize(s2.size());
    for (std::size_t i = 0; i < s2.size(); ++i) {
      s2[i] = sums[2 * i] + sums[2 * i + 1];
      m2[i] = mass[2 * i] + mass[2 * i + 1];
      avg[j][i] = s2[i] / m2[i];
    }
    sums.swap(s2);
    mass.swap(m2);
  }
  std::vector<double> out(hi - lo, 0.0);
  for (std::size_t x = 0; x < out.size(); ++x) {
    double m = 0.0;
    for (int j = 0; j <= levels; ++j) m = std::max(m, std::fabs(avg[j][x >> (levels - j)]));
    out[x] = m;
  }
  return out;
}

std::vector<double> local_maximal_of_set(const DyadicGrid& g, const Cube& q, std::span<const char> inside) {
  std::vector<double> v(inside.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = inside[i] ? 1.0 : 0.0;
  const std::size_t lo = g.leaf_begin(q);
  if (g.uniform()) {
    // Counts are exact integers; compare count / size.
    const int levels = g.depth() - q.level;
    std::vector<std::vector<double>> cnt(levels + 1);
    cnt[levels] = v;
    for (int j = levels - 1; j >= 0; --j) {
      cnt[j].resize(cnt[j + 1].size() / 2);
      for (std::size_t i = 0; i < cnt[j].size(); ++i) cnt[j][i] = cnt[j + 1][2 * i] + cnt[j + 1][2 * i + 1];
    }
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t x = 0; x < v.size(); ++x) {
      double m = 0.0;
      for (int j = 0; j <= levels; ++j) {
        double size = std::ldexp(1.0, levels - j);
        m = std::max(m, cnt[j][x >> (levels - j)] / size);
      }
      out[x] = m;
    }
    return out;
  }
  std::vector<double> full(g.leaf_count(), 0.0);
  std::copy(v.begin(), v.end(), full.begin() + static_cast<std::ptrdiff_t>(lo));
  auto gp = std::shared_ptr<const DyadicGrid>(std::shared_ptr<const DyadicGrid>{}, &g);
  return local_maximal(GridFunction(gp, std::move(full)), q);
}

namespace {

// Sorted values with suffix masses; mass_above(l) = mu{v > l}.
struct Tail {
  std::vector<double> v;
  std::vector<double> suffix;
  Tail(const std::vector<double>& values, const DyadicGrid& g, bool absolute) {
    std::vector<std::pair<double, double>> vm(values.size());
    for (std::size_t x = 0; x < values.size(); ++x)
      vm[x] = {absolute ? std::fabs(values[x]) : values[x], g.leaf_measure(x)};
    std::sort(vm.begin(), vm.end());
    v.resize(vm.size());
    suffix.assign(vm.size() + 1, 0.0);
    for (std::size_t i = vm.size(); i-- > 0;) {
      v[i] = vm[i].first;
      suffix[i] = suffix[i + 1] + vm[i].second;
    }
  }
  double mass_above(double l) const {
    auto it = std::upper_bound(v.begin(), v.end(), l);
    return suffix[static_cast<std::size_t>(it - v.begin())];
  }
};

}  // namespace

WeakTypeCheck check_percentile_weak_type(const GridFunction& f, const GridFunction& pf, Ratio r) {
  const auto& g = *f.grid;
  WeakTypeCheck res;
  Tail tp(pf.values, g, false), tf(f.values, g, true);
  std::vector<double> lambdas = tp.v;
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  for (double lam : lambdas) {
    double lhs = tp.mass_above(lam), rhs = tf.mass_above(lam);
    // lhs <= rhs / r  <=>  r * lhs <= rhs
    if (lhs * static_cast<double>(r.num) > rhs * static_cast<double>(r.den)) {
      res.pass = false;
      res.worst_lambda = lam;
      res.lhs = lhs;
      res.rhs = rhs;
      return res;
    }
  }
  return res;
}

CubeViolation check_percentile_properties(const GridFunction& f, const GridFunction& pk, int k, Ratio r) {
  const auto& g = *f.grid;
  CubeViolation res;
  Ratio co{r.den - r.num, r.den};
  for (std::size_t i = 0; i < g.cubes_at(k); ++i) {
    Cube q{k, static_cast<std::int64_t>(i)};
    double above = 0.0, below = 0.0;
    for (std::size_t x = g.leaf_begin(q); x < g.leaf_end(q); ++x) {
      if (f.values[x] > pk.values[x]) above += g.leaf_measure(x);
      if (f.values[x] < pk.values[x]) below += g.leaf_measure(x);
    }
    if (!r.admits(above, g.measure(q)) || !co.admits(below, g.measure(q))) {
      res.pass = false;
      res.cube = q;
      return res;
    }
  }
  return res;
}

}  // namespace sparsedom
