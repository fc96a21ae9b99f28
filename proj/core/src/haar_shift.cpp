#include "sparsedom/haar_shift.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

namespace {

bool in_generation(const Cube& q, const Cube& c, int gen) { return c.level == q.level + gen && q.contains(c); }

void require_uniform(const DyadicGrid& g) {
  if (!g.uniform()) throw std::invalid_argument("Haar basis requires the uniform measure");
}

// Integrals over the dyadic subcubes of root; tree[j] has 2^j entries.
std::vector<std::vector<double>> integral_tree(std::span<const double> v, int levels, double leaf_mass) {
  std::vector<std::vector<double>> tree(levels + 1);
  tree[levels].resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) tree[levels][i] = v[i] * leaf_mass;
  for (int j = levels - 1; j >= 0; --j) {
    tree[j].resize(tree[j + 1].size() / 2);
    for (std::size_t i = 0; i < tree[j].size(); ++i) tree[j][i] = tree[j + 1][2 * i] + tree[j + 1][2 * i + 1];
  }
  return tree;
}

double inv_sqrt_len(int level) { return std::ldexp(1.0, level / 2) * ((level % 2) ? std::sqrt(2.0) : 1.0); }

}  // namespace

double HaarShiftSpec::norm_bound() const {
  double m = 0.0;
  for (const auto& a : alpha) m = std::max(m, std::fabs(a.value));
  return m;
}

void HaarShiftSpec::validate(int depth) const {
  if (t < 0 || s < 0) throw std::invalid_argument("complexity must be nonnegative");
  for (const auto& a : alpha) {
    if (a.q.level < 0 || a.q.index < 0 || a.q.index >= (std::int64_t{1} << a.q.level))
      throw std::invalid_argument("coefficient cube out of range");
    if (!in_generation(a.q, a.t, t) || !in_generation(a.q, a.s, s))
      throw std::invalid_argument("coefficient key outside D_t(Q) x D_s(Q) at level " + std::to_string(a.q.level));
    if (a.t.level >= depth || a.s.level >= depth) throw std::invalid_argument("coefficient key outside grid");
    if (!std::isfinite(a.value)) throw std::invalid_argument("coefficient not finite");
  }
}

HaarShiftSpec HaarShiftSpec::adjoint() const {
  HaarShiftSpec out{s, t, alpha};
  for (auto& a : out.alpha) std::swap(a.t, a.s);
  return out;
}

HaarShiftSpec HaarShiftSpec::identity(int depth) {
  HaarShiftSpec out;
  for (int k = 0; k < depth; ++k)
    for (std::int64_t i = 0; i < (std::int64_t{1} << k); ++i) out.alpha.push_back({{k, i}, {k, i}, {k, i}, 1.0});
  return out;
}

HaarShiftSpec HaarShiftSpec::random(int depth, int t, int s, std::uint64_t seed) {
  HaarShiftSpec out;
  out.t = t;
  out.s = s;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int gen = std::max(t, s);
  for (int k = 0; k + gen < depth; ++k) {
    for (std::int64_t i = 0; i < (std::int64_t{1} << k); ++i) {
      for (std::int64_t a = 0; a < (std::int64_t{1} << t); ++a)
        for (std::int64_t b = 0; b < (std::int64_t{1} << s); ++b)
          out.alpha.push_back({{k, i}, {k + t, (i << t) + a}, {k + s, (i << s) + b}, u(rng)});
    }
  }
  return out;
}

std::vector<std::vector<double>> haar_expand(const GridFunction& f) {
  const auto& g = *f.grid;
  require_uniform(g);
  const int n = g.depth();
  auto tree = integral_tree(f.values, n, g.leaf_measure(0));
  std::vector<std::vector<double>> coeff(n);
  for (int k = 0; k < n; ++k) {
    coeff[k].resize(g.cubes_at(k));
    for (std::size_t i = 0; i < coeff[k].size(); ++i)
      coeff[k][i] = inv_sqrt_len(k) * (tree[k + 1][2 * i] - tree[k + 1][2 * i + 1]);
  }
  return coeff;
}

GridFunction haar_synthesize(const GridPtr& g, double mean, const std::vector<std::vector<double>>& coeff) {
  require_uniform(*g);
  GridFunction out = GridFunction::constant(g, mean);
  const int n = g->depth();
  for (int k = 0; k < n && k < static_cast<int>(coeff.size()); ++k) {
    const double h = inv_sqrt_len(k);
    for (std::size_t i = 0; i < coeff[k].size(); ++i) {
      if (coeff[k][i] == 0.0) continue;
      Cube q{k, static_cast<std::int64_t>(i)};
      const std::size_t lo = g->leaf_begin(q), hi = g->leaf_end(q), mid = (lo + hi) / 2;
      for (std::size_t x = lo; x < hi; ++x) out[x] += coeff[k][i] * (x < mid ? h : -h);
    }
  }
  return out;
}

ShiftOperator::ShiftOperator(GridPtr g, HaarShiftSpec spec) : grid_(std::move(g)), spec_(std::move(spec)) {
  require_uniform(*grid_);
  spec_.validate(grid_->depth());
  sorted_ = spec_.alpha;
  std::stable_sort(sorted_.begin(), sorted_.end(),
                   [](const HaarCoefficient& a, const HaarCoefficient& b) { return a.q < b.q; });
  const int n = grid_->depth();
  bucket_start_.assign(n, {});
  std::size_t pos = 0;
  for (int k = 0; k < n; ++k) {
    bucket_start_[k].resize(grid_->cubes_at(k) + 1);
    for (std::size_t i = 0; i <= grid_->cubes_at(k); ++i) {
      while (pos < sorted_.size() && sorted_[pos].q < Cube{k, static_cast<std::int64_t>(i)}) ++pos;
      bucket_start_[k][i] = pos;
    }
  }
}

std::vector<std::vector<double>> ShiftOperator::layers(std::span<const double> v_root, const Cube& root) const {
  const int n = grid_->depth();
  const int levels = n - root.level;
  if (v_root.size() != (std::size_t{1} << levels)) throw std::invalid_argument("root vector length mismatch");
  auto tree = integral_tree(v_root, levels, grid_->leaf_measure(0));
  std::vector<std::vector<double>> out(levels, std::vector<double>(v_root.size(), 0.0));
  for (int k = root.level; k < n; ++k) {
    const int rel = k - root.level;
    const std::int64_t first = root.index << rel;
    for (std::int64_t i = first; i < first + (std::int64_t{1} << rel); ++i) {
      for (std::size_t e = bucket_start_[k][i]; e < bucket_start_[k][i + 1]; ++e) {
        const auto& a = sorted_[e];
        const int tl = a.t.level - root.level;
        const std::int64_t ti = a.t.index - (root.index << tl);
        const double ct =
            inv_sqrt_len(a.t.level) * (tree[tl + 1][2 * ti] - tree[tl + 1][2 * ti + 1]) * a.value;
        if (ct == 0.0) continue;
        const double h = inv_sqrt_len(a.s.level) * ct;
        const int sl = a.s.level - root.level;
        const std::size_t lo = static_cast<std::size_t>(a.s.index - (root.index << sl)) << (levels - sl);
        const std::size_t len = std::size_t{1} << (levels - sl);
        auto& row = out[rel];
        for (std::size_t x = lo; x < lo + len / 2; ++x) row[x] += h;
        for (std::size_t x = lo + len / 2; x < lo + len; ++x) row[x] -= h;
      }
    }
  }
  return out;
}

std::vector<double> ShiftOperator::adjoint_layers(const std::vector<std::vector<double>>& u, const Cube& root) const {
  const int n = grid_->depth();
  const int levels = n - root.level;
  const std::size_t size = std::size_t{1} << levels;
  const double mass = grid_->leaf_measure(0);
  std::vector<double> out(size, 0.0);
  for (int k = root.level; k < n; ++k) {
    const int rel = k - root.level;
    const auto& row = u.at(rel);
    const std::int64_t first = root.index << rel;
    for (std::int64_t i = first; i < first + (std::int64_t{1} << rel); ++i) {
      for (std::size_t e = bucket_start_[k][i]; e < bucket_start_[k][i + 1]; ++e) {
        const auto& a = sorted_[e];
        const int sl = a.s.level - root.level;
        const std::size_t lo = static_cast<std::size_t>(a.s.index - (root.index << sl)) << (levels - sl);
        const std::size_t len = std::size_t{1} << (levels - sl);
        double inner = 0.0;
        for (std::size_t x = lo; x < lo + len / 2; ++x) inner += row[x];
        for (std::size_t x = lo + len / 2; x < lo + len; ++x) inner -= row[x];
        inner *= mass * inv_sqrt_len(a.s.level) * a.value;
        if (inner == 0.0) continue;
        const double h = inv_sqrt_len(a.t.level) * inner;
        const int tl = a.t.level - root.level;
        const std::size_t tlo = static_cast<std::size_t>(a.t.index - (root.index << tl)) << (levels - tl);
        const std::size_t tlen = std::size_t{1} << (levels - tl);
        for (std::size_t x = tlo; x < tlo + tlen / 2; ++x) out[x] += h;
        for (std::size_t x = tlo + tlen / 2; x < tlo + tlen; ++x) out[x] -= h;
      }
    }
  }
  return out;
}

std::vector<double> ShiftOperator::window_sup(const std::vector<std::vector<double>>& layers, int first_layer,
                                              std::size_t begin, std::size_t end) {
  std::vector<double> out(end - begin, 0.0);
  for (std::size_t x = begin; x < end; ++x) {
    double p = 0.0, hi = 0.0, lo = 0.0;
    for (std::size_t j = first_layer; j < layers.size(); ++j) {
      p += layers[j][x];
      hi = std::max(hi, p);
      lo = std::min(lo, p);
    }
    out[x - begin] = hi - lo;
  }
  return out;
}

namespace {

Cube whole_or(const std::optional<Cube>& root) { return root.value_or(Cube{0, 0}); }

std::span<const double> root_span(const GridFunction& f, const Cube& root) {
  const std::size_t lo = f.grid->leaf_begin(root), hi = f.grid->leaf_end(root);
  return std::span<const double>(f.values.data() + lo, hi - lo);
}

}  // namespace

GridFunction apply_shift(const GridFunction& f, const HaarShiftSpec& spec, std::optional<Cube> root) {
  ShiftOperator op(f.grid, spec);
  const Cube q = whole_or(root);
  auto lay = op.layers(root_span(f, q), q);
  GridFunction out = GridFunction::zeros(f.grid);
  const std::size_t lo = f.grid->leaf_begin(q);
  for (const auto& row : lay)
    for (std::size_t x = 0; x < row.size(); ++x) out[lo + x] += row[x];
  return out;
}

GridFunction shift_max_trunc(const GridFunction& f, const HaarShiftSpec& spec, std::optional<Cube> root) {
  ShiftOperator op(f.grid, spec);
  const Cube q = whole_or(root);
  auto lay = op.layers(root_span(f, q), q);
  auto sup = ShiftOperator::window_sup(lay, 0, 0, std::size_t{1} << (f.grid->depth() - q.level));
  GridFunction out = GridFunction::zeros(f.grid);
  std::copy(sup.begin(), sup.end(), out.values.begin() + static_cast<std::ptrdiff_t>(f.grid->leaf_begin(q)));
  return out;
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Top right singular vector of Sh_Q; returns the largest Rayleigh ratio seen.
double linear_iteration(const ShiftOperator& op, const Cube& root, int iterations, std::vector<double>& v) {
  const std::size_t size = std::size_t{1} << (op.grid()->depth() - root.level);
  if (v.size() != size) {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> nd;
    v.resize(size);
    for (double& x : v) x = nd(rng);
  }
  double best = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) return best;
    for (double& x : v) x /= nv;
    auto lay = op.layers(v, root);
    std::vector<double> w(size, 0.0);
    for (const auto& row : lay)
      for (std::size_t x = 0; x < size; ++x) w[x] += row[x];
    best = std::max(best, norm2(w));
    std::vector<std::vector<double>> u(lay.size(), w);
    v = op.adjoint_layers(u, root);
  }
  return best;
}

}  // namespace

double measure_linear_norm(const ShiftOperator& op, const Cube& root, int iterations) {
  std::vector<double> v;
  return linear_iteration(op, root, iterations, v);
}

double measure_maximal_norm(const ShiftOperator& op, const Cube& root, int iterations) {
  std::vector<double> v;
  double best = linear_iteration(op, root, iterations, v);
  const std::size_t size = v.size();
  for (int it = 0; it < iterations; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) break;
    for (double& x : v) x /= nv;
    auto lay = op.layers(v, root);
    std::vector<std::vector<double>> u(lay.size(), std::vector<double>(size, 0.0));
    double total = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
      // Window of prefix positions (a, b] realizing max - min.
      double p = 0.0, hi = 0.0, lo = 0.0;
      std::size_t ahi = 0, alo = 0;
      for (std::size_t j = 0; j < lay.size(); ++j) {
        p += lay[j][x];
        if (p > hi) hi = p, ahi = j + 1;
        if (p < lo) lo = p, alo = j + 1;
      }
      const double val = hi - lo;
      total += val * val;
      const double sign = ahi > alo ? 1.0 : -1.0;
      for (std::size_t j = std::min(ahi, alo); j < std::max(ahi, alo); ++j) u[j][x] = sign * val;
    }
    best = std::max(best, std::sqrt(total));
    v = op.adjoint_layers(u, root);
  }
  return best;
}

ShiftNorms measure_shift_norms(const ShiftOperator& op, int iterations, int max_level) {
  const int n = op.grid()->depth();
  if (max_level < 0 || max_level >= n) max_level = n - 1;
  ShiftNorms out;
  out.iterations = iterations;
  out.linear = measure_linear_norm(op, Cube{0, 0}, iterations);
  for (int k = 0; k <= max_level; ++k) {
    for (std::int64_t i = 0; i < (std::int64_t{1} << k); ++i) {
      double m = measure_maximal_norm(op, Cube{k, i}, iterations);
      if (m > out.maximal_sup) {
        out.maximal_sup = m;
        out.argmax = Cube{k, i};
      }
    }
  }
  return out;
}

std::vector<char> enlarge(const DyadicGrid& g, const Cube& q, std::vector<char> inside, int n) {
  for (int it = 0; it < n; ++it) {
    auto m = local_maximal_of_set(g, q, inside);
    for (std::size_t x = 0; x < inside.size(); ++x) inside[x] = m[x] * 3.0 > 1.0 ? 1 : 0;
  }
  return inside;
}

std::vector<Cube> maximal_cubes(const DyadicGrid& g, const Cube& q, std::span<const char> inside) {
  const int levels = g.depth() - q.level;
  std::vector<std::size_t> prefix(inside.size() + 1, 0);
  for (std::size_t i = 0; i < inside.size(); ++i) prefix[i + 1] = prefix[i] + (inside[i] ? 1 : 0);
  std::vector<Cube> out;
  std::vector<Cube> stack{q};
  while (!stack.empty()) {
    Cube c = stack.back();
    stack.pop_back();
    const int rel = c.level - q.level;
    const std::size_t lo = static_cast<std::size_t>(c.index - (q.index << rel)) << (levels - rel);
    const std::size_t len = std::size_t{1} << (levels - rel);
    const std::size_t cnt = prefix[lo + len] - prefix[lo];
    if (cnt == len) {
      out.push_back(c);
    } else if (cnt > 0) {
      stack.push_back(c.child(1));
      stack.push_back(c.child(0));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sparsedom
