#include "sparsedom/extract.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

// ---------------------------------------------------------------- layered

namespace {

// mass of a leaf set per cube, for every level
std::vector<std::vector<double>> set_mass_tree(const DyadicGrid& g, const std::vector<char>& set) {
  const int n = g.depth();
  std::vector<std::vector<double>> t(n + 1);
  t[n].resize(g.leaf_count());
  for (std::size_t x = 0; x < set.size(); ++x) t[n][x] = set[x] ? g.leaf_measure(x) : 0.0;
  for (int k = n - 1; k >= 0; --k) {
    t[k].resize(g.cubes_at(k));
    for (std::size_t i = 0; i < t[k].size(); ++i) t[k][i] = t[k + 1][2 * i] + t[k + 1][2 * i + 1];
  }
  return t;
}

std::vector<double> sparse_maximal(const GridFunction& f, const SparseFamily& s) {
  auto avg = all_level_averages(f);
  const auto& g = *f.grid;
  std::vector<double> out(f.size(), 0.0);
  for (int k = 0; k < static_cast<int>(s.levels.size()); ++k) {
    for (auto i : s.levels[k]) {
      const double v = std::fabs(avg[k][i]);
      Cube q{k, i};
      for (std::size_t x = g.leaf_begin(q); x < g.leaf_end(q); ++x) out[x] = std::max(out[x], v);
    }
  }
  return out;
}

}  // namespace

LayeredResult extract_layered(const GridFunction& f) {
  const auto& g = *f.grid;
  const int n = g.depth();
  LayeredResult res{SparseFamily::adapted(f.grid), 0};
  const double top = f.sup_abs();
  if (top == 0.0) return res;
  auto avg = all_level_averages(f);
  // mk[k][i] = M^k f on the level-k cube i
  std::vector<std::vector<double>> mk(n + 1);
  double minpos = top;
  for (int k = 0; k <= n; ++k) {
    mk[k].resize(g.cubes_at(k));
    for (std::size_t i = 0; i < mk[k].size(); ++i) {
      const double a = std::fabs(avg[k][i]);
      if (a > 0.0) minpos = std::min(minpos, a);
      mk[k][i] = k == 0 ? a : std::max(a, mk[k - 1][i >> 1]);
    }
  }
  std::vector<char> covered(g.leaf_count(), 0);
  for (int l = 1; l <= 1100; ++l) {
    const double t = std::ldexp(top, -l);
    auto mass = set_mass_tree(g, covered);
    std::vector<Cube> layer;
    for (int k = 0; k <= n; ++k) {
      const auto& lm = g.level_measures(k);
      for (std::size_t i = 0; i < mk[k].size(); ++i) {
        if (!(mk[k][i] > t)) continue;
        if (k > 0 && mk[k - 1][i >> 1] > t) continue;
        // E_k[1_{S^l}] <= 1/2 on the cube
        if (l > 1 && !(2.0 * mass[k][i] <= lm[i])) continue;
        layer.push_back(Cube{k, static_cast<std::int64_t>(i)});
      }
    }
    res.layers = l;
    for (const auto& q : layer) {
      res.family.add(q);
      std::fill(covered.begin() + g.leaf_begin(q), covered.begin() + g.leaf_end(q), 1);
    }
    if (t < minpos && layer.empty()) break;
  }
  return res;
}

DominationReport audit_layered(const GridFunction& f, const SparseFamily& s, Ratio r) {
  GridFunction mf = doob_maximal(f);
  GridFunction ms(f.grid, sparse_maximal(f, s));
  GridFunction rhs = percentile_maximal(ms, r);
  auto rep = check_domination(mf, rhs, 2.0, "layered: M f <= 2 P_r(M_S f)");
  rep.measured["r"] = r.value();
  return rep;
}

// ---------------------------------------------------------------- greedy

namespace {

double set_average(const std::vector<double>& f, const FlatFamily& fam, const FlatSet& s) {
  double num = 0.0, den = 0.0;
  for (auto c : s.cells) {
    num += f[c] * fam.cell_measure[c];
    den += fam.cell_measure[c];
  }
  return num / den;
}

}  // namespace

void attach_averages(FlatFamily& e, const std::vector<double>& f) {
  for (auto& s : e.sets) s.value = std::fabs(set_average(f, e, s));
}

GreedyResult extract_greedy(const FlatFamily& e) {
  GreedyResult res;
  res.family.cell_measure = e.cell_measure;
  std::vector<std::size_t> order(e.sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return e.sets[a].value > e.sets[b].value; });
  std::vector<char> shadow(e.cell_measure.size(), 0);
  for (auto idx : order) {
    const auto& s = e.sets[idx];
    double inter = 0.0, total = 0.0;
    for (auto c : s.cells) {
      total += e.cell_measure[c];
      if (shadow[c]) inter += e.cell_measure[c];
    }
    if (total <= 0.0) throw std::invalid_argument("greedy input set of zero measure");
    GreedyStep step{idx, inter / total, 2.0 * inter <= total};
    res.trace.push_back(step);
    if (!step.accepted) continue;
    std::vector<std::uint32_t> w;
    for (auto c : s.cells)
      if (!shadow[c]) w.push_back(c);
    for (auto c : s.cells) shadow[c] = 1;
    res.family.sets.push_back(s);
    res.family.witnesses.push_back(std::move(w));
    res.accepted.push_back(idx);
  }
  return res;
}

DominationReport audit_greedy(const std::vector<double>& f, const FlatFamily& e, const FlatFamily& s) {
  const std::size_t ncell = e.cell_measure.size();
  std::vector<double> me(ncell, 0.0), msf(ncell, 0.0), rhs(ncell, 0.0);
  for (const auto& set : e.sets) {
    const double v = std::fabs(set_average(f, e, set));
    for (auto c : set.cells) me[c] = std::max(me[c], v);
  }
  for (const auto& set : s.sets) {
    const double v = std::fabs(set_average(f, s, set));
    for (auto c : set.cells) msf[c] = std::max(msf[c], v);
  }
  std::vector<std::pair<double, double>> vm;
  for (const auto& set : e.sets) {
    vm.clear();
    double total = 0.0;
    for (auto c : set.cells) {
      vm.emplace_back(msf[c], e.cell_measure[c]);
      total += e.cell_measure[c];
    }
    const double p = percentile_of(vm, total, Ratio{1, 2});
    for (auto c : set.cells) rhs[c] = std::max(rhs[c], p);
  }
  auto rep = check_domination(me, rhs, 1.0, "greedy: M_E f <= P_E^{1/2}(M_S f)");
  rep.measured["family_size"] = static_cast<double>(e.sets.size());
  rep.measured["selected"] = static_cast<double>(s.sets.size());
  return rep;
}

// ---------------------------------------------------------------- stopping

namespace {

Ratio default_stopping_ratio(const DyadicGrid& g) {
  const double reg = g.regularity();
  const double rounded = std::round(reg);
  if (std::fabs(reg - rounded) > 1e-12) throw std::invalid_argument("default r needs an integral regularity constant");
  return Ratio{1, 2 * (static_cast<std::int64_t>(rounded) + 3)};
}

double cube_percentile(const DyadicGrid& g, const Cube& q, const std::vector<double>& v_on_q, Ratio r) {
  if (g.uniform()) {
    std::vector<double> c = v_on_q;
    return percentile_uniform(c, r);
  }
  std::vector<std::pair<double, double>> vm;
  const std::size_t lo = g.leaf_begin(q);
  for (std::size_t i = 0; i < v_on_q.size(); ++i) vm.emplace_back(v_on_q[i], g.leaf_measure(lo + i));
  return percentile_of(vm, g.measure(q), r);
}

}  // namespace

StoppingResult extract_stopping(const GridFunction& f, StoppingOperator op, const PredictableSigns& sigma,
                                std::optional<Ratio> r_opt) {
  const auto& g = *f.grid;
  const int n = g.depth();
  StoppingResult res;
  res.r = r_opt.value_or(default_stopping_ratio(g));
  const double root_r = std::sqrt(res.r.value());
  auto avg = all_level_averages(f);
  res.node_bound.inequality = "node: mu(B) <= mu(A)/2";
  res.node_bound.proof_constant = 0.5;

  struct Pending {
    Cube cube;
    std::size_t depth;
  };
  std::vector<Pending> queue{{Cube{0, 0}, 0}};
  res.nus.push_back(StoppingTime::constant(f.grid, 0));
  std::vector<double> rhs(f.size(), 0.0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Cube a = queue[head].cube;
    const std::size_t depth = queue[head].depth;
    const int k = a.level;
    const std::size_t lo = g.leaf_begin(a), hi = g.leaf_end(a);
    std::vector<double> mloc(hi - lo, 0.0);
    for (std::size_t x = lo; x < hi; ++x) {
      double m = 0.0;
      for (int j = k; j <= n; ++j) m = std::max(m, std::fabs(avg[j][g.ancestor(x, j)]));
      mloc[x - lo] = m;
    }
    StoppingNode node;
    node.cube = a;
    node.percentile = cube_percentile(g, a, mloc, res.r);
    node.threshold = node.percentile / root_r;
    const double weight = op == StoppingOperator::square ? node.percentile * node.percentile : node.percentile;
    for (std::size_t x = lo; x < hi; ++x) rhs[x] += weight;

    // first level m >= k where the running operator or |E_m f| exceeds the threshold
    std::vector<int> stop(hi - lo, kInfLevel);
    for (std::size_t x = lo; x < hi; ++x) {
      double run = 0.0, acc = 0.0;
      for (int m = k; m <= n; ++m) {
        const double cur = avg[m][g.ancestor(x, m)];
        if (m == k) {
          acc = op == StoppingOperator::square ? cur * cur : sigma.at(k, x) * cur;
        } else {
          const double d = cur - avg[m - 1][g.ancestor(x, m - 1)];
          acc += op == StoppingOperator::square ? d * d : sigma.at(m, x) * d;
        }
        run = std::max(run, op == StoppingOperator::square ? std::sqrt(acc) : std::fabs(acc));
        if (std::max(run, std::fabs(cur)) > node.threshold) {
          stop[x - lo] = m;
          break;
        }
      }
    }
    double stopped = 0.0;
    for (std::size_t x = lo; x < hi;) {
      const int m = stop[x - lo];
      if (m == kInfLevel) {
        ++x;
        continue;
      }
      Cube c{m, g.ancestor(x, m)};
      stopped += g.measure(c);
      if (m > k) {
        if (res.nus.size() <= depth + 1) res.nus.push_back(StoppingTime::constant(f.grid, kInfLevel));
        for (std::size_t y = g.leaf_begin(c); y < g.leaf_end(c); ++y) res.nus[depth + 1].level[y] = m;
        queue.push_back({c, depth + 1});
      } else {
        res.node_bound.notes.push_back("threshold exceeded at the node's own level");
      }
      x = g.leaf_end(c);
    }
    node.stopped_mass = stopped;
    node.within_bound = 2.0 * stopped <= g.measure(a);
    const double frac = stopped / g.measure(a);
    if (frac > res.node_bound.best_constant) {
      res.node_bound.best_constant = frac;
      res.node_bound.witness = lo;
    }
    if (!node.within_bound) res.node_bound.pass = false;
    res.nodes.push_back(node);
  }
  res.node_bound.measured["nodes"] = static_cast<double>(res.nodes.size());
  res.sequence = check_sparse_sequence(res.nus, Ratio{1, 2});

  std::vector<double> lhs;
  if (op == StoppingOperator::square) {
    lhs = square_function(f).values;
    for (double& v : lhs) v *= v;
    res.domination = check_domination(lhs, rhs, std::nullopt, "stopping: (S f)^2 <= C sum P^2");
  } else {
    lhs = transform_max_trunc(f, sigma).values;
    res.domination = check_domination(lhs, rhs, std::nullopt, "stopping: T* f <= C sum P");
  }
  res.domination.measured["r"] = res.r.value();
  res.domination.measured["R"] = g.regularity();
  res.domination.measured["nodes"] = static_cast<double>(res.nodes.size());
  return res;
}

DominationReport audit_median_bound(const GridFunction& f, const PredictableSigns& sigma, StoppingOperator op,
                                    Ratio r) {
  const auto& g = *f.grid;
  const int n = g.depth();
  const double reg = std::round(g.regularity());
  const Ratio rr = r.times(static_cast<std::int64_t>(reg) + 2);
  if (!rr.valid_probability()) throw std::invalid_argument("(R+2) r must lie in (0,1)");
  const double bound = std::sqrt(2.0 / r.value());
  DominationReport rep;
  rep.inequality = op == StoppingOperator::square ? "median: P^{(R+2)r}(S_(k) f) <= sqrt(2/r) P^r(M_(k) f)"
                                                  : "median: P^{(R+2)r}(T*_(k) f) <= sqrt(2/r) P^r(M_(k) f)";
  rep.proof_constant = bound;
  auto avg = all_level_averages(f);
  for (int k = 0; k <= n; ++k) {
    StoppingTime nu = StoppingTime::constant(f.grid, k);
    GridFunction t = op == StoppingOperator::square ? square_function(f, nu) : transform_max_trunc(f, sigma, nu);
    for (std::size_t i = 0; i < g.cubes_at(k); ++i) {
      Cube a{k, static_cast<std::int64_t>(i)};
      const std::size_t lo = g.leaf_begin(a), hi = g.leaf_end(a);
      std::vector<double> tv(t.values.begin() + lo, t.values.begin() + hi), mv(hi - lo);
      for (std::size_t x = lo; x < hi; ++x) {
        double m = 0.0;
        for (int j = k; j <= n; ++j) m = std::max(m, std::fabs(avg[j][g.ancestor(x, j)]));
        mv[x - lo] = m;
      }
      const double lhs = cube_percentile(g, a, tv, rr);
      const double rhs = cube_percentile(g, a, mv, r);
      const double c = ratio_or_inf(lhs, rhs);
      if (c > rep.best_constant) {
        rep.best_constant = c;
        rep.witness = lo;
      }
      if (!(lhs <= bound * rhs)) rep.pass = false;
    }
  }
  rep.measured["r"] = r.value();
  return rep;
}

// ---------------------------------------------------------------- Haar shift

HaarResult extract_haar_shift(const GridFunction& f, const ShiftOperator& op, double norm_sup, const Cube& root) {
  const auto& g = *f.grid;
  const int n = g.depth();
  const auto& spec = op.spec();
  HaarResult res;
  res.c0 = haar_c0(spec.t, spec.s);
  res.r = Ratio{1, 2 * static_cast<std::int64_t>(res.c0 + 1) * (res.c0 + 1)};
  res.norm_sup = norm_sup;
  res.family = SparseFamily::adapted(f.grid);
  const std::size_t rlo = g.leaf_begin(root), rhi = g.leaf_end(root);

  double mean = 0.0;
  for (std::size_t x = rlo; x < rhi; ++x) mean += f[x] * g.leaf_measure(x);
  mean /= g.measure(root);
  res.removed_mean = mean;
  GridFunction f0 = GridFunction::zeros(f.grid);
  for (std::size_t x = rlo; x < rhi; ++x) f0[x] = f[x] - mean;
  auto lay = op.layers(std::span<const double>(f0.values.data() + rlo, rhi - rlo), root);

  res.child_bound.inequality = "haar: children measure <= |Q|/2";
  res.child_bound.proof_constant = 0.5;
  const double scale = norm_sup * norm_sup / std::sqrt(res.r.value());
  const int enlargements = spec.t + spec.s + 1;
  std::vector<double> rhs(f.size(), 0.0);
  std::vector<Cube> queue{root};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Cube q = queue[head];
    res.family.add(q);
    const std::size_t lo = g.leaf_begin(q), hi = g.leaf_end(q);
    auto mq = local_maximal(f0, q);
    std::vector<double> tmp = mq;
    const double p = percentile_uniform(tmp, res.r);
    for (std::size_t x = lo; x < hi; ++x) rhs[x] += p;
    if (q.level >= n) continue;
    const double thr = scale * p;
    auto sh = ShiftOperator::window_sup(lay, q.level - root.level, lo - rlo, hi - rlo);
    std::vector<char> omega(hi - lo, 0);
    for (std::size_t x = 0; x < omega.size(); ++x) omega[x] = (sh[x] > thr || mq[x] > p) ? 1 : 0;
    omega = enlarge(g, q, std::move(omega), enlargements);
    auto kids = maximal_cubes(g, q, omega);
    if (kids.size() == 1 && kids[0] == q) {
      kids = {q.child(0), q.child(1)};
      res.child_bound.notes.push_back("enlarged stopping set covers a node");
    }
    double m = 0.0;
    for (const auto& c : kids) m += g.measure(c);
    const double frac = m / g.measure(q);
    if (frac > res.child_bound.best_constant) {
      res.child_bound.best_constant = frac;
      res.child_bound.witness = lo;
    }
    if (!(2.0 * m <= g.measure(q))) res.child_bound.pass = false;
    for (const auto& c : kids) queue.push_back(c);
  }
  res.family.normalize();
  res.sparsity = verify_sparsity(res.family, Ratio{1, 2});

  auto top = ShiftOperator::window_sup(lay, 0, 0, rhi - rlo);
  std::vector<double> lhs(f.size(), 0.0);
  std::copy(top.begin(), top.end(), lhs.begin() + static_cast<std::ptrdiff_t>(rlo));
  res.domination = check_domination(lhs, rhs, std::nullopt, "haar: Sh* f <= C sum P_Q^r(M_Q f) 1_Q");
  res.domination.measured["r"] = res.r.value();
  res.domination.measured["C0"] = res.c0;
  res.domination.measured["norm_sup"] = norm_sup;
  res.domination.measured["removed_mean"] = mean;
  res.domination.measured["nodes"] = static_cast<double>(queue.size());
  return res;
}

DominationReport audit_local_median(const GridFunction& f, const ShiftOperator& op, double norm_sup, Ratio r) {
  const auto& g = *f.grid;
  const int n = g.depth();
  const int c0 = haar_c0(op.spec().t, op.spec().s);
  const Ratio rc = r.times(c0);
  if (!rc.valid_probability()) throw std::invalid_argument("C0 r must lie in (0,1)");
  const double norm = 1.01 * norm_sup;
  const double bound = norm * norm / std::sqrt(r.value());
  DominationReport rep;
  rep.inequality = "local median: P^{C0 r}(Sh*_Q f) <= |Sh*|^2 r^{-1/2} P^r(M_Q f)";
  rep.proof_constant = bound;
  auto lay = op.layers(f.values, Cube{0, 0});
  for (int k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < g.cubes_at(k); ++i) {
      Cube q{k, static_cast<std::int64_t>(i)};
      const std::size_t lo = g.leaf_begin(q), hi = g.leaf_end(q);
      auto sh = ShiftOperator::window_sup(lay, k, lo, hi);
      auto mq = local_maximal(f, q);
      const double lhs = percentile_uniform(sh, rc);
      const double rhs = percentile_uniform(mq, r);
      const double c = ratio_or_inf(lhs, rhs);
      if (c > rep.best_constant) {
        rep.best_constant = c;
        rep.witness = lo;
      }
      if (!(lhs <= bound * rhs)) rep.pass = false;
    }
  }
  rep.measured["norm_sup"] = norm_sup;
  rep.measured["C0"] = c0;
  rep.measured["r"] = r.value();
  return rep;
}

}  // namespace sparsedom
