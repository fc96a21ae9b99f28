#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "sparsedom/dyadic.hpp"
#include "sparsedom/extract.hpp"
#include "sparsedom/martingale.hpp"

using namespace sparsedom;
using sdtest::fn;
using sdtest::rnd;
using V = std::vector<double>;

TEST(Transform, IdentityAndZero) {
  auto f = rnd(6, 4);
  EXPECT_EQ(martingale_transform(f, PredictableSigns::constant(f.grid, 1.0)).values, f.values);
  auto z = martingale_transform(f, PredictableSigns::constant(f.grid, 0.0));
  for (double v : z.values) EXPECT_EQ(v, 0.0);
}

TEST(Transform, HandTelescoped) {
  auto f = fn({1, 3, 5, 7});
  auto sigma = PredictableSigns::per_level(f.grid, {1, -1, 1});
  // (4,4,4,4) + (2,2,-2,-2) + (-1,1,-1,1)
  EXPECT_EQ(martingale_transform(f, sigma).values, (V{5, 7, 1, 3}));
  // partial sums (4,4,4,4), (6,6,2,2), (5,7,1,3)
  EXPECT_EQ(transform_max_trunc(f, sigma).values, (V{6, 7, 4, 4}));
}

TEST(Transform, MaxTruncWithUnitSignsIsDoob) {
  auto f = rnd(7, 9);
  EXPECT_EQ(transform_max_trunc(f, PredictableSigns::constant(f.grid, 1.0)).values, doob_maximal(f).values);
  for (double v : transform_max_trunc(f, PredictableSigns::constant(f.grid, 0.0)).values) EXPECT_EQ(v, 0.0);
}

TEST(Transform, LocalizedHeadTerm) {
  auto f = rnd(5, 2);
  auto one = PredictableSigns::constant(f.grid, 1.0);
  EXPECT_EQ(martingale_transform(f, one, StoppingTime::constant(f.grid, 0)).values, f.values);
  // with sigma = 1 the localized transform at nu = k is E_k f + sum_{j>k} df_j = f
  EXPECT_EQ(martingale_transform(f, one, StoppingTime::constant(f.grid, 3)).values, f.values);
}

TEST(Transform, RejectsUnpredictableSigns) {
  auto g = build_grid(2);
  PredictableSigns bad{g, {{1.0}, {1.0, 1.0}, {1.0, 1.0}}, 1.0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Square, Examples) {
  for (double v : square_function(fn({-3, -3, -3, -3})).values) EXPECT_EQ(v, 3.0);
  EXPECT_EQ(square_function(fn({1, -1})).values, (V{1, 1}));
}

class MartProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MartProperty, TransformBoundsAndLinearity) {
  auto f = rnd(8, GetParam()), g = rnd(8, GetParam() + 100);
  auto sigma = PredictableSigns::rademacher(f.grid, GetParam());
  auto tf = martingale_transform(f, sigma), ts = transform_max_trunc(f, sigma);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LE(std::fabs(tf[i]), ts[i]);
  V sum(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sum[i] = 3 * f[i] - g[i];
  auto tsum = martingale_transform(GridFunction(f.grid, sum), sigma);
  auto tg = martingale_transform(g, sigma);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(tsum[i], 3 * tf[i] - tg[i]);
}

TEST_P(MartProperty, TransformOfConditionalExpectationUsesLowLevels) {
  auto f = rnd(8, GetParam());
  auto sigma = PredictableSigns::rademacher(f.grid, GetParam());
  const int k = 4;
  auto t = martingale_transform(cond_expect(f, k), sigma);
  EXPECT_EQ(cond_expect(t, k).values, t.values);
}

TEST_P(MartProperty, SquareFunctionIsometry) {
  auto f = rnd(9, GetParam());
  const double a = square_function(f).lp_norm_pow(2.0), b = f.lp_norm_pow(2.0);
  EXPECT_NEAR(a, b, 1e-10 * b);
}

TEST_P(MartProperty, ConditionalIsometry) {
  auto f = rnd(7, GetParam());
  for (int k = 0; k <= 7; ++k) {
    auto s = square_function(f, StoppingTime::constant(f.grid, k));
    for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
      Cube a{k, static_cast<std::int64_t>(i)};
      double lhs = 0, rhs = 0;
      for (std::size_t x = f.grid->leaf_begin(a); x < f.grid->leaf_end(a); ++x) {
        lhs += s[x] * s[x];
        rhs += f[x] * f[x];
      }
      EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + rhs));
    }
  }
}

TEST_P(MartProperty, MedianBound) {
  auto f = rnd(8, GetParam());
  auto sigma = PredictableSigns::rademacher(f.grid, GetParam());
  for (auto op : {StoppingOperator::transform, StoppingOperator::square}) {
    EXPECT_TRUE(audit_median_bound(f, sigma, op, Ratio{1, 8}).pass);
    EXPECT_TRUE(audit_median_bound(f, sigma, op, Ratio{1, 20}).pass);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, MartProperty, ::testing::Range<std::uint64_t>(1, 16));
