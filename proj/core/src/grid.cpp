#include "sparsedom/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsedom {

DyadicGrid::DyadicGrid(int depth) : depth_(depth), uniform_(true) {
  if (depth < 0 || depth > 30) throw std::invalid_argument("depth out of range");
  level_mass_.assign(depth_ + 1, {});
  level_mass_[depth_].assign(leaf_count(), std::ldexp(1.0, -depth_));
  precompute();
}

DyadicGrid::DyadicGrid(int depth, std::vector<double> leaf_measure) : depth_(depth), uniform_(false) {
  if (depth < 0 || depth > 30) throw std::invalid_argument("depth out of range");
  if (leaf_measure.size() != leaf_count())
    throw std::invalid_argument("leaf measure length " + std::to_string(leaf_measure.size()) +
                                " does not match 2^depth");
  for (double m : leaf_measure) {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("leaf measures must be positive");
  }
  level_mass_.assign(depth_ + 1, {});
  level_mass_[depth_] = std::move(leaf_measure);
  precompute();
}

void DyadicGrid::precompute() {
  for (int k = depth_ - 1; k >= 0; --k) {
    const auto& below = level_mass_[k + 1];
    auto& here = level_mass_[k];
    here.resize(cubes_at(k));
    for (std::size_t i = 0; i < here.size(); ++i) here[i] = below[2 * i] + below[2 * i + 1];
  }
  regularity_ = depth_ == 0 ? 1.0 : 0.0;
  for (int k = 1; k <= depth_; ++k) {
    for (std::size_t i = 0; i < cubes_at(k); ++i) {
      double ratio = level_mass_[k - 1][i >> 1] / level_mass_[k][i];
      if (ratio > regularity_) {
        regularity_ = ratio;
        regularity_witness_ = Cube{k, static_cast<std::int64_t>(i)};
      }
    }
  }
}

GridPtr build_grid(int depth, std::optional<std::vector<double>> leaf_measure) {
  if (leaf_measure) return std::make_shared<DyadicGrid>(depth, std::move(*leaf_measure));
  return std::make_shared<DyadicGrid>(depth);
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("grid function without grid");
  if (values.size() != grid->leaf_count()) throw std::invalid_argument("grid function length mismatch");
  for (double x : values) {
    if (!std::isfinite(x)) throw std::invalid_argument("grid function entries must be finite");
  }
}

GridFunction GridFunction::zeros(GridPtr g) {
  std::size_t n = g->leaf_count();
  return GridFunction(std::move(g), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::constant(GridPtr g, double c) {
  std::size_t n = g->leaf_count();
  return GridFunction(std::move(g), std::vector<double>(n, c));
}

double GridFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * grid->leaf_measure(i);
  return s;
}

double GridFunction::sup_abs() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::fabs(v));
  return s;
}

double GridFunction::lp_norm_pow(double p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += std::pow(std::fabs(values[i]), p) * grid->leaf_measure(i);
  return s;
}

GridFunction GridFunction::abs() const {
  GridFunction out = *this;
  for (double& v : out.values) v = std::fabs(v);
  return out;
}

StoppingTime StoppingTime::constant(GridPtr g, int k) {
  if (k != kInfLevel && (k < 0 || k > g->depth())) throw std::out_of_range("stopping level out of range");
  std::size_t n = g->leaf_count();
  return StoppingTime{std::move(g), std::vector<int>(n, k)};
}

std::optional<std::size_t> StoppingTime::adaptedness_violation() const {
  const int n = grid->depth();
  for (std::size_t x = 0; x < level.size(); ++x) {
    int k = level[x];
    if (k == kInfLevel) continue;
    if (k < 0 || k > n) return x;
    Cube q{k, grid->ancestor(x, k)};
    std::size_t first = grid->leaf_begin(q);
    if (x != first) {
      if (level[first] != k) return x;
      continue;
    }
    for (std::size_t y = grid->leaf_begin(q); y < grid->leaf_end(q); ++y) {
      if (level[y] != k) return x;
    }
  }
  return std::nullopt;
}

bool StoppingTime::adapted() const { return !adaptedness_violation().has_value(); }

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return;
  if (!a || !b || a->depth() != b->depth() || a->leaf_measures() != b->leaf_measures())
    throw std::invalid_argument("inconsistent grids");
}

}  // namespace sparsedom
