#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/sparse_family.hpp"

namespace sparsedom {

// Uniform product of two dyadic grids; cells are row-major (axis 1 outer).
struct ProductGrid {
  int n1 = 0;
  int n2 = 0;

  std::size_t cells() const { return std::size_t{1} << (n1 + n2); }
  std::size_t cell(std::size_t i1, std::size_t i2) const { return (i1 << n2) | i2; }
  double cell_measure() const { return std::ldexp(1.0, -(n1 + n2)); }
};

struct Rectangle {
  Cube a;
  Cube b;
  double average = 0.0;
};

// All dyadic rectangles with levels capped by max_levels (per axis), each with <f>_R.
std::vector<Rectangle> enumerate_rectangles(const ProductGrid& pg, const std::vector<double>& f,
                                            std::optional<std::pair<int, int>> max_levels = std::nullopt);
std::vector<double> strong_maximal(const ProductGrid& pg, const std::vector<double>& f);
std::vector<double> rect_percentile_maximal(const ProductGrid& pg, const std::vector<double>& f, Ratio r);

// Flat family of every rectangle, ordered by (k1, i1, k2, i2), valued by |<f>_R|.
FlatFamily rectangle_family(const ProductGrid& pg, const std::vector<double>& f);
// Every interval [a 2^-m, b 2^-m) over a grid of 2^depth cells, valued by |<f>_J|.
FlatFamily interval_family(const GridFunction& f, int endpoint_depth);

}  // namespace sparsedom
