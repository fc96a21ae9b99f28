#include "sparsedom/martingale.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

namespace {

std::size_t sigma_cells(int k) { return std::size_t{1} << (k == 0 ? 0 : k - 1); }

const StoppingTime& start_or_zero(const GridFunction& f, const std::optional<StoppingTime>& nu,
                                  std::optional<StoppingTime>& storage) {
  if (nu) {
    require_same_grid(f.grid, nu->grid);
    if (!nu->adapted()) throw std::invalid_argument("stopping time is not adapted");
    return *nu;
  }
  storage = StoppingTime::constant(f.grid, 0);
  return *storage;
}

}  // namespace

PredictableSigns PredictableSigns::constant(GridPtr g, double c) {
  std::vector<double> lv(g->depth() + 1, c);
  return per_level(std::move(g), lv);
}

PredictableSigns PredictableSigns::per_level(GridPtr g, const std::vector<double>& by_level) {
  PredictableSigns s;
  s.grid = std::move(g);
  const int n = s.grid->depth();
  if (static_cast<int>(by_level.size()) != n + 1) throw std::invalid_argument("one sigma per level expected");
  s.values.resize(n + 1);
  for (int k = 0; k <= n; ++k) s.values[k].assign(sigma_cells(k), by_level[k]);
  return s;
}

PredictableSigns PredictableSigns::rademacher(GridPtr g, std::uint64_t seed) {
  PredictableSigns s;
  s.grid = std::move(g);
  std::mt19937_64 rng(seed);
  const int n = s.grid->depth();
  s.values.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    s.values[k].resize(sigma_cells(k));
    for (double& v : s.values[k]) v = (rng() & 1U) ? 1.0 : -1.0;
  }
  return s;
}

double PredictableSigns::at(int k, std::size_t leaf) const {
  if (k == 0) return values[0][0];
  return values[k][grid->ancestor(leaf, k - 1)];
}

double PredictableSigns::sup_abs() const {
  double m = 0.0;
  for (const auto& lv : values)
    for (double v : lv) m = std::max(m, std::fabs(v));
  return m;
}

void PredictableSigns::validate() const {
  if (!grid) throw std::invalid_argument("sigma without grid");
  if (static_cast<int>(values.size()) != grid->depth() + 1) throw std::invalid_argument("sigma is not predictable");
  for (int k = 0; k <= grid->depth(); ++k) {
    if (values[k].size() != sigma_cells(k)) throw std::invalid_argument("sigma is not predictable");
  }
  if (sup_abs() > bound) throw std::invalid_argument("sigma exceeds its magnitude bound");
}

GridFunction martingale_transform(const GridFunction& f, const PredictableSigns& sigma,
                                  const std::optional<StoppingTime>& nu) {
  require_same_grid(f.grid, sigma.grid);
  sigma.validate();
  std::optional<StoppingTime> storage;
  const StoppingTime& start = start_or_zero(f, nu, storage);
  const auto& g = *f.grid;
  const int n = g.depth();
  auto avg = all_level_averages(f);
  GridFunction out = GridFunction::zeros(f.grid);
  for (std::size_t x = 0; x < f.size(); ++x) {
    int s = start.level[x];
    if (s == kInfLevel) continue;
    double prev = avg[s][g.ancestor(x, s)];
    double acc = sigma.at(s, x) * prev;
    for (int k = s + 1; k <= n; ++k) {
      double cur = avg[k][g.ancestor(x, k)];
      acc += sigma.at(k, x) * (cur - prev);
      prev = cur;
    }
    out.values[x] = acc;
  }
  return out;
}

GridFunction transform_max_trunc(const GridFunction& f, const PredictableSigns& sigma,
                                 const std::optional<StoppingTime>& nu) {
  require_same_grid(f.grid, sigma.grid);
  sigma.validate();
  std::optional<StoppingTime> storage;
  const StoppingTime& start = start_or_zero(f, nu, storage);
  const auto& g = *f.grid;
  const int n = g.depth();
  auto avg = all_level_averages(f);
  GridFunction out = GridFunction::zeros(f.grid);
  for (std::size_t x = 0; x < f.size(); ++x) {
    int s = start.level[x];
    if (s == kInfLevel) continue;
    double prev = avg[s][g.ancestor(x, s)];
    double acc = sigma.at(s, x) * prev;
    double best = std::fabs(acc);
    for (int k = s + 1; k <= n; ++k) {
      double cur = avg[k][g.ancestor(x, k)];
      acc += sigma.at(k, x) * (cur - prev);
      prev = cur;
      best = std::max(best, std::fabs(acc));
    }
    out.values[x] = best;
  }
  return out;
}

GridFunction square_function(const GridFunction& f, const std::optional<StoppingTime>& nu) {
  std::optional<StoppingTime> storage;
  const StoppingTime& start = start_or_zero(f, nu, storage);
  const auto& g = *f.grid;
  const int n = g.depth();
  auto avg = all_level_averages(f);
  GridFunction out = GridFunction::zeros(f.grid);
  for (std::size_t x = 0; x < f.size(); ++x) {
    int s = start.level[x];
    if (s == kInfLevel) continue;
    double prev = avg[s][g.ancestor(x, s)];
    double acc = prev * prev;
    for (int k = s + 1; k <= n; ++k) {
      double cur = avg[k][g.ancestor(x, k)];
      acc += (cur - prev) * (cur - prev);
      prev = cur;
    }
    out.values[x] = std::sqrt(acc);
  }
  return out;
}

}  // namespace sparsedom
