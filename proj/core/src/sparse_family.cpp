#include "sparsedom/sparse_family.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

double FlatFamily::measure(const std::vector<std::uint32_t>& cells) const {
  double m = 0.0;
  for (auto c : cells) m += cell_measure.at(c);
  return m;
}

SparseFamily SparseFamily::adapted(GridPtr g) {
  SparseFamily s;
  s.levels.assign(g->depth() + 1, {});
  s.grid = std::move(g);
  return s;
}

void SparseFamily::add(const Cube& q) {
  if (q.level < 0 || q.level >= static_cast<int>(levels.size())) throw std::out_of_range("cube level outside family");
  auto& lv = levels[q.level];
  auto it = std::lower_bound(lv.begin(), lv.end(), q.index);
  if (it == lv.end() || *it != q.index) lv.insert(it, q.index);
}

bool SparseFamily::contains(const Cube& q) const {
  if (q.level < 0 || q.level >= static_cast<int>(levels.size())) return false;
  return std::binary_search(levels[q.level].begin(), levels[q.level].end(), q.index);
}

std::size_t SparseFamily::size() const {
  if (flat) return flat->sets.size();
  std::size_t n = 0;
  for (const auto& lv : levels) n += lv.size();
  return n;
}

std::vector<Cube> SparseFamily::cubes() const {
  std::vector<Cube> out;
  for (int k = 0; k < static_cast<int>(levels.size()); ++k)
    for (auto i : levels[k]) out.push_back({k, i});
  return out;
}

std::vector<char> SparseFamily::indicator(int k) const {
  std::vector<char> out(grid->leaf_count(), 0);
  for (auto i : levels.at(k)) {
    Cube q{k, i};
    std::fill(out.begin() + grid->leaf_begin(q), out.begin() + grid->leaf_end(q), 1);
  }
  return out;
}

void SparseFamily::normalize() {
  for (auto& lv : levels) {
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
  }
}

DominationReport check_domination(const std::vector<double>& lhs, const std::vector<double>& rhs,
                                  std::optional<double> proof_constant, std::string name) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("domination sides differ in length");
  DominationReport rep;
  rep.inequality = std::move(name);
  rep.proof_constant = proof_constant;
  for (std::size_t x = 0; x < lhs.size(); ++x) {
    const double c = ratio_or_inf(lhs[x], rhs[x]);
    if (c > rep.best_constant) {
      rep.best_constant = c;
      rep.witness = x;
    }
    if (proof_constant && !(lhs[x] <= *proof_constant * rhs[x])) rep.pass = false;
  }
  return rep;
}

DominationReport check_domination(const GridFunction& lhs, const GridFunction& rhs,
                                  std::optional<double> proof_constant, std::string name) {
  require_same_grid(lhs.grid, rhs.grid);
  return check_domination(lhs.values, rhs.values, proof_constant, std::move(name));
}

DominationReport verify_sparsity(const SparseFamily& s, Ratio eta) {
  if (s.flat) {
    FlatFamily copy = *s.flat;
    return verify_flat_sparsity(copy, eta);
  }
  DominationReport rep;
  rep.inequality = "sparsity";
  rep.proof_constant = eta.value();
  rep.best_constant = 1.0;
  const auto& g = *s.grid;
  const int n = static_cast<int>(s.levels.size()) - 1;
  std::vector<char> later(g.leaf_count(), 0);
  for (int k = n; k >= 0; --k) {
    for (auto i : s.levels[k]) {
      Cube q{k, i};
      double free = 0.0;
      for (std::size_t x = g.leaf_begin(q); x < g.leaf_end(q); ++x)
        if (!later[x]) free += g.leaf_measure(x);
      const double mq = g.measure(q);
      if (free / mq < rep.best_constant) {
        rep.best_constant = free / mq;
        rep.witness = g.leaf_begin(q);
      }
      // free >= eta * mq, as a cross product
      if (!(free * static_cast<double>(eta.den) >= mq * static_cast<double>(eta.num))) rep.pass = false;
    }
    auto ind = s.indicator(k);
    for (std::size_t x = 0; x < later.size(); ++x) later[x] |= ind[x];
  }
  rep.measured["cubes"] = static_cast<double>(s.size());
  return rep;
}

DominationReport verify_flat_sparsity(FlatFamily& fam, Ratio eta) {
  DominationReport rep;
  rep.inequality = "sparsity";
  rep.proof_constant = eta.value();
  rep.best_constant = 1.0;
  const std::size_t ncell = fam.cell_measure.size();
  if (fam.witnesses.empty()) {
    std::vector<char> used(ncell, 0);
    for (const auto& s : fam.sets) {
      std::vector<std::uint32_t> w;
      for (auto c : s.cells)
        if (!used[c]) w.push_back(c);
      for (auto c : s.cells) used[c] = 1;
      fam.witnesses.push_back(std::move(w));
    }
  }
  if (fam.witnesses.size() != fam.sets.size()) throw std::invalid_argument("witness count mismatch");
  std::vector<char> taken(ncell, 0);
  for (std::size_t i = 0; i < fam.sets.size(); ++i) {
    const auto& set = fam.sets[i].cells;
    for (auto c : fam.witnesses[i]) {
      if (taken[c] || !std::binary_search(set.begin(), set.end(), c)) {
        rep.pass = false;
        rep.notes.push_back("witness " + std::to_string(i) + " not disjoint or not contained");
        break;
      }
      taken[c] = 1;
    }
    const double mw = fam.measure(fam.witnesses[i]);
    const double ms = fam.measure(set);
    if (ms <= 0.0) throw std::invalid_argument("flat set of zero measure");
    if (mw / ms < rep.best_constant) {
      rep.best_constant = mw / ms;
      rep.witness = i;
    }
    if (!(mw * static_cast<double>(eta.den) >= ms * static_cast<double>(eta.num))) rep.pass = false;
  }
  rep.measured["sets"] = static_cast<double>(fam.sets.size());
  return rep;
}

std::vector<StoppingTime> to_stopping_times(const SparseFamily& s) {
  if (s.flat) throw std::invalid_argument("stopping times need the adapted form");
  const auto& g = s.grid;
  const int n = static_cast<int>(s.levels.size()) - 1;
  // hits[x] lists the levels m with x in S_m, ascending.
  std::vector<std::vector<int>> hits(g->leaf_count());
  for (int k = 0; k <= n; ++k) {
    for (auto i : s.levels[k]) {
      Cube q{k, i};
      for (std::size_t x = g->leaf_begin(q); x < g->leaf_end(q); ++x) hits[x].push_back(k);
    }
  }
  std::size_t count = 0;
  for (const auto& h : hits) count = std::max(count, h.size());
  std::vector<StoppingTime> out;
  for (std::size_t j = 0; j < count; ++j) {
    StoppingTime nu = StoppingTime::constant(g, kInfLevel);
    for (std::size_t x = 0; x < hits.size(); ++x)
      if (j < hits[x].size()) nu.level[x] = hits[x][j];
    out.push_back(std::move(nu));
  }
  return out;
}

SparseFamily from_stopping_times(const GridPtr& g, const std::vector<StoppingTime>& nus) {
  SparseFamily s = SparseFamily::adapted(g);
  for (const auto& nu : nus) {
    if (auto bad = nu.adaptedness_violation()) throw std::invalid_argument("stopping time not adapted");
    for (std::size_t x = 0; x < nu.level.size(); ++x) {
      const int m = nu.level[x];
      if (m == kInfLevel) continue;
      Cube q{m, g->ancestor(x, m)};
      if (x == g->leaf_begin(q)) s.add(q);
    }
  }
  return s;
}

DominationReport check_sparse_sequence(const std::vector<StoppingTime>& nus, Ratio bound) {
  DominationReport rep;
  rep.inequality = "sparse-stopping-sequence";
  rep.proof_constant = bound.value();
  for (std::size_t j = 0; j < nus.size(); ++j) {
    const auto& nu = nus[j];
    if (nu.adaptedness_violation()) {
      rep.pass = false;
      rep.notes.push_back("nu_" + std::to_string(j) + " not adapted");
      continue;
    }
    if (j > 0) {
      for (std::size_t x = 0; x < nu.level.size(); ++x) {
        if (nu.level[x] != kInfLevel && (nus[j - 1].level[x] == kInfLevel || nus[j - 1].level[x] >= nu.level[x])) {
          rep.pass = false;
          rep.notes.push_back("nu_" + std::to_string(j) + " not strictly increasing");
          break;
        }
      }
    }
    if (j + 1 >= nus.size()) continue;
    const auto& next = nus[j + 1];
    const auto& g = *nu.grid;
    for (std::size_t x = 0; x < nu.level.size();) {
      const int m = nu.level[x];
      if (m == kInfLevel) {
        ++x;
        continue;
      }
      Cube q{m, g.ancestor(x, m)};
      double hit = 0.0;
      for (std::size_t y = g.leaf_begin(q); y < g.leaf_end(q); ++y)
        if (next.level[y] != kInfLevel) hit += g.leaf_measure(y);
      const double mq = g.measure(q);
      if (hit / mq > rep.best_constant) {
        rep.best_constant = hit / mq;
        rep.witness = x;
      }
      if (!bound.admits(hit, mq)) rep.pass = false;
      x = g.leaf_end(q);
    }
  }
  rep.measured["stopping_times"] = static_cast<double>(nus.size());
  return rep;
}

SparseFamily random_sparse_family(const GridPtr& g, std::uint64_t seed, Ratio eta) {
  std::mt19937_64 rng(seed);
  SparseFamily s = SparseFamily::adapted(g);
  s.eta = eta;
  const int n = g->depth();
  std::vector<Cube> stack{Cube{0, 0}};
  while (!stack.empty()) {
    Cube a = stack.back();
    stack.pop_back();
    s.add(a);
    if (a.level >= n) continue;
    // budget: later mass inside a may not exceed (1 - eta)|a|
    const double budget = g->measure(a) * static_cast<double>(eta.den - eta.num) / static_cast<double>(eta.den);
    double used = 0.0;
    std::vector<Cube> picked;
    const int tries = 6;
    for (int t = 0; t < tries; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      if (a.level + d > n) continue;
      const std::int64_t off = static_cast<std::int64_t>(rng() % (std::uint64_t{1} << d));
      Cube c{a.level + d, (a.index << d) + off};
      if (used + g->measure(c) > budget) continue;
      bool clash = false;
      for (const auto& p : picked) clash |= p.contains(c) || c.contains(p);
      if (clash) continue;
      used += g->measure(c);
      picked.push_back(c);
    }
    for (auto it = picked.rbegin(); it != picked.rend(); ++it) stack.push_back(*it);
  }
  return s;
}

GridFunction apply_sparse(const GridFunction& f, const SparseFamily& s, SparseMode mode, Ratio r) {
  if (s.flat) {
    return GridFunction(f.grid, apply_sparse_flat(f.values, *s.flat, mode, r));
  }
  require_same_grid(f.grid, s.grid);
  const auto& g = *f.grid;
  GridFunction out = GridFunction::zeros(f.grid);
  std::vector<std::vector<double>> avg;
  if (mode != SparseMode::cancellative_C) avg = all_level_averages(f);
  GridFunction af = f.abs();
  for (int k = 0; k < static_cast<int>(s.levels.size()); ++k) {
    for (auto i : s.levels[k]) {
      Cube q{k, i};
      double v = mode == SparseMode::cancellative_C ? percentile_on_cube(af, q, r) : std::fabs(avg[k][i]);
      for (std::size_t x = g.leaf_begin(q); x < g.leaf_end(q); ++x) {
        if (mode == SparseMode::max_M)
          out[x] = std::max(out[x], v);
        else
          out[x] += v;
      }
    }
  }
  return out;
}

std::vector<double> apply_sparse_flat(const std::vector<double>& f, const FlatFamily& fam, SparseMode mode,
                                      Ratio r) {
  if (f.size() != fam.cell_measure.size()) throw std::invalid_argument("flat function length mismatch");
  std::vector<double> out(f.size(), 0.0);
  for (const auto& s : fam.sets) {
    double v = 0.0;
    if (mode == SparseMode::cancellative_C) {
      std::vector<std::pair<double, double>> vm;
      double total = 0.0;
      for (auto c : s.cells) {
        vm.emplace_back(std::fabs(f[c]), fam.cell_measure[c]);
        total += fam.cell_measure[c];
      }
      v = percentile_of(vm, total, r);
    } else {
      double num = 0.0, den = 0.0;
      for (auto c : s.cells) {
        num += f[c] * fam.cell_measure[c];
        den += fam.cell_measure[c];
      }
      v = std::fabs(num / den);
    }
    for (auto c : s.cells) {
      if (mode == SparseMode::max_M)
        out[c] = std::max(out[c], v);
      else
        out[c] += v;
    }
  }
  return out;
}

}  // namespace sparsedom
