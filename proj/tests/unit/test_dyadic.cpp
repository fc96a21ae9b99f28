#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "sparsedom/dyadic.hpp"

using namespace sparsedom;
using sdtest::fn;
using sdtest::rnd;
using V = std::vector<double>;

TEST(Grid, UniformDepthTwo) {
  auto g = build_grid(2);
  EXPECT_EQ(g->leaf_count(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(g->leaf_measure(i), 0.25);
  EXPECT_EQ(g->regularity(), 2.0);
}

TEST(Grid, DepthZeroIsOneLeaf) {
  auto g = build_grid(0);
  EXPECT_EQ(g->leaf_count(), 1u);
  EXPECT_EQ(g->total_mass(), 1.0);
}

TEST(Grid, NonUniformRegularity) {
  auto g = build_grid(2, V{0.5, 0.25, 0.125, 0.125});
  // mu([0,1)) / mu([1/2,1)) = 1 / (1/4)
  EXPECT_DOUBLE_EQ(g->regularity(), 4.0);
  EXPECT_EQ(g->regularity_witness(), (Cube{1, 1}));
  EXPECT_EQ(g->measure(Cube{1, 0}), 0.75);
}

TEST(Grid, RejectsBadMeasures) {
  EXPECT_THROW(build_grid(2, V{0.5, 0.5, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(build_grid(2, V{0.5, 0.5}), std::invalid_argument);
}

TEST(CondExpect, Examples) {
  auto f = fn({1, 3, 5, 7});
  EXPECT_EQ(cond_expect(f, 1).values, (V{2, 2, 6, 6}));
  EXPECT_EQ(cond_expect(f, 2).values, f.values);
  EXPECT_EQ(cond_expect(f, 0).values, (V{4, 4, 4, 4}));
  EXPECT_THROW(cond_expect(f, 3), std::out_of_range);
}

TEST(MartDiff, Examples) {
  auto f = fn({1, 3, 5, 7});
  EXPECT_EQ(mart_diff(f, 1).values, (V{-2, -2, 2, 2}));
  EXPECT_EQ(mart_diff(f, 0).values, (V{4, 4, 4, 4}));
  EXPECT_EQ(mart_diff(fn({3, 3, 3, 3}), 2).values, (V{0, 0, 0, 0}));
}

TEST(Percentile, OnCube) {
  EXPECT_EQ(percentile_on_cube(fn({2, 2, 2, 2}), Cube{0, 0}, Ratio{1, 3}), 2.0);
  auto f = fn({0, 0, 1, 1});
  EXPECT_EQ(percentile_on_cube(f, Cube{0, 0}, Ratio{1, 2}), 0.0);
  EXPECT_EQ(percentile_on_cube(f, Cube{0, 0}, Ratio{1, 4}), 1.0);
  EXPECT_EQ(percentile_on_cube(fn({0, 0, 0, 8}), Cube{0, 0}, Ratio{1, 2}), 0.0);
}

TEST(Percentile, Conditional) {
  auto f = fn({0, 0, 1, 1});
  EXPECT_EQ(cond_percentile(f, 1, Ratio{1, 2}).values, f.values);
  auto g = rnd(6, 3);
  EXPECT_EQ(cond_percentile(g, 6, Ratio{1, 3}).values, g.values);
  for (int k = 0; k <= 6; ++k) {
    auto ek = cond_expect(g, k);
    EXPECT_EQ(cond_percentile(ek, k, Ratio{1, 4}).values, ek.values);
  }
}

TEST(Doob, Examples) {
  EXPECT_EQ(doob_maximal(fn({1, 0, 0, 0})).values, (V{1, 0.5, 0.25, 0.25}));
  EXPECT_EQ(doob_maximal(fn({-3, -3, -3, -3})).values, (V{3, 3, 3, 3}));
  auto f = fn({1, -3, 5, 7});
  EXPECT_EQ(doob_maximal(f, 2).values, (V{1, 3, 5, 7}));
}

TEST(Doob, StoppedStartIsZeroWhereInfinite) {
  auto f = fn({1, 2, 3, 4});
  StoppingTime nu{f.grid, {1, 1, kInfLevel, kInfLevel}};
  auto m = doob_maximal(f, nu);
  EXPECT_EQ(m.values, (V{1.5, 2, 0, 0}));
}

TEST(PercentileMaximal, Examples) {
  EXPECT_EQ(percentile_maximal(fn({0, 0, 0, 8}), Ratio{1, 2}).values, (V{0, 0, 0, 8}));
  EXPECT_EQ(percentile_maximal(fn({-2, -2, -2, -2}), Ratio{1, 2}).values, (V{2, 2, 2, 2}));
}

TEST(StoppingTime, Adaptedness) {
  auto g = build_grid(2);
  EXPECT_TRUE((StoppingTime{g, {1, 1, 2, kInfLevel}}).adapted());
  StoppingTime bad{g, {1, 2, 2, 2}};
  EXPECT_FALSE(bad.adapted());
  EXPECT_EQ(bad.adaptedness_violation(), std::optional<std::size_t>{0});
}

// ---- properties over random inputs ----

class DyadicProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(DyadicProperty, TowerAndTelescoping) {
  auto f = rnd(8, GetParam());
  for (int j = 0; j <= 8; j += 2)
    for (int k = 0; k <= 8; k += 3)
      EXPECT_EQ(cond_expect(cond_expect(f, j), k).values, cond_expect(f, std::min(j, k)).values);
  V sum(f.size(), 0.0);
  for (int k = 0; k <= 8; ++k) {
    auto d = mart_diff(f, k);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += d[i];
  }
  EXPECT_EQ(sum, f.values);
}

TEST_P(DyadicProperty, MartingaleDifferencesHaveZeroMean) {
  auto f = rnd(7, GetParam());
  for (int k = 1; k <= 7; ++k) {
    auto m = level_averages(mart_diff(f, k), k - 1);
    for (double v : m) EXPECT_EQ(v, 0.0);
  }
}

TEST_P(DyadicProperty, WeakTypeAndNormBound) {
  auto f = rnd(9, GetParam());
  for (Ratio r : {Ratio{1, 10}, Ratio{1, 4}, Ratio{1, 2}}) {
    auto pf = percentile_maximal(f, r);
    EXPECT_TRUE(check_percentile_weak_type(f, pf, r).pass);
    for (double p : {0.5, 1.0, 2.0})
      EXPECT_LE(pf.lp_norm_pow(p), f.lp_norm_pow(p) / r.value() * (1 + 1e-12));
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_GE(pf[i], std::fabs(f[i]));
  }
}

TEST_P(DyadicProperty, PercentileProperties) {
  auto f = rnd(8, GetParam());
  for (Ratio r : {Ratio{1, 10}, Ratio{1, 2}, Ratio{3, 4}})
    for (int k = 0; k <= 8; ++k) EXPECT_TRUE(check_percentile_properties(f, cond_percentile(f, k, r), k, r).pass);
}

TEST_P(DyadicProperty, PercentileMomentBound) {
  auto f = rnd(8, GetParam());
  const Ratio r{1, 4};
  for (int k = 0; k <= 8; k += 2) {
    auto pk = cond_percentile(f, k, r);
    for (double q : {0.5, 1.0, 2.0}) {
      V pw(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) pw[i] = std::pow(std::fabs(f[i]), q);
      auto eq = cond_expect(GridFunction(f.grid, pw), k);
      for (std::size_t i = 0; i < f.size(); ++i)
        EXPECT_LE(pk[i], std::pow(r.value(), -1.0 / q) * std::pow(eq[i], 1.0 / q) * (1 + 1e-12) + 1e-12);
    }
  }
}

TEST_P(DyadicProperty, DoobWeakOneOne) {
  auto f = rnd(8, GetParam());
  auto m = doob_maximal(f);
  for (double lam : m.values) {
    if (lam <= 0) continue;
    double mass = 0, integral = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (m[i] > lam) {
        mass += f.grid->leaf_measure(i);
        integral += std::fabs(f[i]) * f.grid->leaf_measure(i);
      }
    }
    EXPECT_LE(mass, integral / lam * (1 + 1e-12));
  }
}

TEST_P(DyadicProperty, NonUniformPercentileProperties) {
  std::mt19937_64 rng(GetParam());
  // masses are multiples of 2^-9 summing to 1, so threshold sums are exact
  std::uniform_int_distribution<int> u(1, 7);
  V w(64);
  int used = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const int a = u(rng);
    used += a;
    w[i] = a / 512.0;
  }
  w.back() = (512 - used) / 512.0;
  auto g = build_grid(6, w);
  GridFunction f(g, rnd(6, GetParam()).values);
  for (int k = 0; k <= 6; ++k)
    EXPECT_TRUE(check_percentile_properties(f, cond_percentile(f, k, Ratio{1, 3}), k, Ratio{1, 3}).pass);
  EXPECT_NEAR(cond_expect(f, 0)[0], f.integral(), 1e-9 * (1 + std::fabs(f.integral())));
}

INSTANTIATE_TEST_SUITE_P(Seeds, DyadicProperty, ::testing::Range<std::uint64_t>(1, 21));
