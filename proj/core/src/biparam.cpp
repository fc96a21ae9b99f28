#include "sparsedom/biparam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

namespace {

// Summed-area table with one row/column of zero padding.
struct Sat {
  std::size_t w;
  std::vector<double> s;
  Sat(const ProductGrid& pg, const std::vector<double>& f) : w((std::size_t{1} << pg.n2) + 1) {
    const std::size_t h = (std::size_t{1} << pg.n1) + 1;
    s.assign(h * w, 0.0);
    for (std::size_t i = 1; i < h; ++i)
      for (std::size_t j = 1; j < w; ++j)
        s[i * w + j] = f[pg.cell(i - 1, j - 1)] + s[(i - 1) * w + j] + s[i * w + j - 1] - s[(i - 1) * w + j - 1];
  }
  double sum(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
    return s[i1 * w + j1] - s[i0 * w + j1] - s[i1 * w + j0] + s[i0 * w + j0];
  }
};

void check(const ProductGrid& pg, const std::vector<double>& f) {
  if (pg.n1 < 0 || pg.n2 < 0 || pg.n1 + pg.n2 > 24) throw std::invalid_argument("product grid out of range");
  if (f.size() != pg.cells()) throw std::invalid_argument("product function length mismatch");
}

std::vector<std::uint32_t> rect_cells(const ProductGrid& pg, const Cube& a, const Cube& b) {
  std::vector<std::uint32_t> out;
  const std::size_t a0 = static_cast<std::size_t>(a.index) << (pg.n1 - a.level);
  const std::size_t a1 = static_cast<std::size_t>(a.index + 1) << (pg.n1 - a.level);
  const std::size_t b0 = static_cast<std::size_t>(b.index) << (pg.n2 - b.level);
  const std::size_t b1 = static_cast<std::size_t>(b.index + 1) << (pg.n2 - b.level);
  out.reserve((a1 - a0) * (b1 - b0));
  for (std::size_t i = a0; i < a1; ++i)
    for (std::size_t j = b0; j < b1; ++j) out.push_back(static_cast<std::uint32_t>(pg.cell(i, j)));
  return out;
}

}  // namespace

std::vector<Rectangle> enumerate_rectangles(const ProductGrid& pg, const std::vector<double>& f,
                                            std::optional<std::pair<int, int>> max_levels) {
  check(pg, f);
  const int c1 = max_levels ? std::min(max_levels->first, pg.n1) : pg.n1;
  const int c2 = max_levels ? std::min(max_levels->second, pg.n2) : pg.n2;
  Sat sat(pg, f);
  std::vector<Rectangle> out;
  for (int k1 = 0; k1 <= c1; ++k1)
    for (std::int64_t i1 = 0; i1 < (std::int64_t{1} << k1); ++i1)
      for (int k2 = 0; k2 <= c2; ++k2)
        for (std::int64_t i2 = 0; i2 < (std::int64_t{1} << k2); ++i2) {
          const std::size_t s1 = std::size_t{1} << (pg.n1 - k1), s2 = std::size_t{1} << (pg.n2 - k2);
          const double sum = sat.sum(i1 * s1, (i1 + 1) * s1, i2 * s2, (i2 + 1) * s2);
          out.push_back({Cube{k1, i1}, Cube{k2, i2}, sum / static_cast<double>(s1 * s2)});
        }
  return out;
}

std::vector<double> strong_maximal(const ProductGrid& pg, const std::vector<double>& f) {
  check(pg, f);
  Sat sat(pg, f);
  std::vector<double> out(pg.cells(), 0.0);
  for (std::size_t i = 0; i < (std::size_t{1} << pg.n1); ++i)
    for (std::size_t j = 0; j < (std::size_t{1} << pg.n2); ++j) {
      double m = 0.0;
      for (int k1 = 0; k1 <= pg.n1; ++k1) {
        const std::size_t s1 = std::size_t{1} << (pg.n1 - k1), a = (i / s1) * s1;
        for (int k2 = 0; k2 <= pg.n2; ++k2) {
          const std::size_t s2 = std::size_t{1} << (pg.n2 - k2), b = (j / s2) * s2;
          m = std::max(m, std::fabs(sat.sum(a, a + s1, b, b + s2) / static_cast<double>(s1 * s2)));
        }
      }
      out[pg.cell(i, j)] = m;
    }
  return out;
}

std::vector<double> rect_percentile_maximal(const ProductGrid& pg, const std::vector<double>& f, Ratio r) {
  check(pg, f);
  std::vector<double> out(pg.cells(), 0.0);
  std::vector<double> vals;
  for (int k1 = 0; k1 <= pg.n1; ++k1)
    for (std::int64_t i1 = 0; i1 < (std::int64_t{1} << k1); ++i1)
      for (int k2 = 0; k2 <= pg.n2; ++k2)
        for (std::int64_t i2 = 0; i2 < (std::int64_t{1} << k2); ++i2) {
          auto cells = rect_cells(pg, Cube{k1, i1}, Cube{k2, i2});
          vals.clear();
          for (auto c : cells) vals.push_back(std::fabs(f[c]));
          const double p = percentile_uniform(vals, r);
          for (auto c : cells) out[c] = std::max(out[c], p);
        }
  return out;
}

FlatFamily rectangle_family(const ProductGrid& pg, const std::vector<double>& f) {
  FlatFamily fam;
  fam.cell_measure.assign(pg.cells(), pg.cell_measure());
  for (const auto& r : enumerate_rectangles(pg, f)) {
    FlatSet s;
    s.cells = rect_cells(pg, r.a, r.b);
    s.label = std::to_string(r.a.level) + "," + std::to_string(r.a.index) + "," + std::to_string(r.b.level) + "," +
              std::to_string(r.b.index);
    fam.sets.push_back(std::move(s));
  }
  // |<f>_R| computed from the cells, the same way every audit recomputes it
  for (auto& s : fam.sets) {
    double num = 0.0, den = 0.0;
    for (auto c : s.cells) {
      num += f[c] * fam.cell_measure[c];
      den += fam.cell_measure[c];
    }
    s.value = std::fabs(num / den);
  }
  return fam;
}

FlatFamily interval_family(const GridFunction& f, int endpoint_depth) {
  const auto& g = *f.grid;
  if (endpoint_depth < 0 || endpoint_depth > g.depth()) throw std::invalid_argument("endpoint depth out of range");
  FlatFamily fam;
  fam.cell_measure = g.leaf_measures();
  const std::size_t m = std::size_t{1} << endpoint_depth;
  const std::size_t step = g.leaf_count() / m;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b <= m; ++b) {
      FlatSet s;
      for (std::size_t x = a * step; x < b * step; ++x) s.cells.push_back(static_cast<std::uint32_t>(x));
      s.label = std::to_string(a) + ":" + std::to_string(b);
      fam.sets.push_back(std::move(s));
    }
  for (auto& s : fam.sets) {
    double num = 0.0, den = 0.0;
    for (auto c : s.cells) {
      num += f[c] * fam.cell_measure[c];
      den += fam.cell_measure[c];
    }
    s.value = std::fabs(num / den);
  }
  return fam;
}

}  // namespace sparsedom
