#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "sparsedom/biparam.hpp"
#include "sparsedom/dyadic.hpp"
#include "sparsedom/extract.hpp"

using namespace sparsedom;
using V = std::vector<double>;

namespace {

V random_cells(const ProductGrid& pg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-1000, 1000);
  V f(pg.cells());
  for (auto& v : f) v = d(rng);
  return f;
}

}  // namespace

TEST(Rectangles, Counts) {
  EXPECT_EQ(enumerate_rectangles({1, 1}, V(4, 0.0)).size(), 9u);
  EXPECT_EQ(enumerate_rectangles({0, 0}, V(1, 0.0)).size(), 1u);
  EXPECT_EQ(enumerate_rectangles({2, 1}, V(8, 0.0)).size(), 21u);
  for (const auto& r : enumerate_rectangles({2, 2}, V(16, -3.0))) EXPECT_DOUBLE_EQ(r.average, -3.0);
}

TEST(StrongMaximal, Examples) {
  ProductGrid pg{1, 1};
  for (double v : strong_maximal(pg, V(4, -2.5))) EXPECT_DOUBLE_EQ(v, 2.5);
  V f(4, 0.0);
  f[pg.cell(0, 0)] = 1.0;
  auto m = strong_maximal(pg, f);
  EXPECT_DOUBLE_EQ(m[pg.cell(0, 0)], 1.0);
  EXPECT_DOUBLE_EQ(m[pg.cell(0, 1)], 0.5);
  EXPECT_DOUBLE_EQ(m[pg.cell(1, 0)], 0.5);
  EXPECT_DOUBLE_EQ(m[pg.cell(1, 1)], 0.25);
}

TEST(RectPercentile, Examples) {
  ProductGrid pg{1, 1};
  for (double v : rect_percentile_maximal(pg, V(4, -2.0), Ratio{1, 2})) EXPECT_DOUBLE_EQ(v, 2.0);
  V f(4, 0.0);
  f[pg.cell(0, 0)] = 1.0;
  auto p = rect_percentile_maximal(pg, f, Ratio{1, 2});
  EXPECT_DOUBLE_EQ(p[pg.cell(0, 0)], 1.0);
  EXPECT_DOUBLE_EQ(p[pg.cell(0, 1)], 0.0);
  EXPECT_DOUBLE_EQ(p[pg.cell(1, 0)], 0.0);
  EXPECT_DOUBLE_EQ(p[pg.cell(1, 1)], 0.0);
}

class BiparamProperty : public ::testing::TestWithParam<int> {};

TEST_P(BiparamProperty, DominatesOneParameterMaxima) {
  ProductGrid pg{3, 3};
  auto f = random_cells(pg, GetParam());
  auto ms = strong_maximal(pg, f);
  // Cubes Q x [0,1) make the strong maximal function at least the axis-1 Doob maximal function of the row averages.
  V rows(std::size_t{1} << pg.n1, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < (std::size_t{1} << pg.n2); ++j) rows[i] += f[pg.cell(i, j)];
    rows[i] /= double(std::size_t{1} << pg.n2);
  }
  auto m1 = doob_maximal(GridFunction(build_grid(pg.n1), rows));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < (std::size_t{1} << pg.n2); ++j) {
      EXPECT_GE(ms[pg.cell(i, j)] + 1e-9, m1[i]);
      EXPECT_GE(ms[pg.cell(i, j)] + 1e-9, std::abs(f[pg.cell(i, j)]));
    }
  auto pr = rect_percentile_maximal(pg, f, Ratio{1, 2});
  for (std::size_t x = 0; x < f.size(); ++x) EXPECT_GE(pr[x], std::abs(f[x]));
}

TEST_P(BiparamProperty, GreedyRectanglesConstantOne) {
  ProductGrid pg{2, 3};
  auto f = random_cells(pg, GetParam());
  auto e = rectangle_family(pg, f);
  EXPECT_EQ(e.sets.size(), enumerate_rectangles(pg, f).size());
  auto res = extract_greedy(e);
  EXPECT_FALSE(res.family.witnesses.empty());
  EXPECT_TRUE(verify_flat_sparsity(res.family, Ratio{1, 2}).pass);
  auto aud = audit_greedy(f, e, res.family);
  EXPECT_TRUE(aud.pass);
  EXPECT_LE(aud.best_constant, 1.0 + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, BiparamProperty, ::testing::Range(1, 9));
