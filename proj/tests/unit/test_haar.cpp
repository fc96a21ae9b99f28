#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "sparsedom/dyadic.hpp"
#include "sparsedom/extract.hpp"
#include "sparsedom/haar_shift.hpp"

using namespace sparsedom;
using sdtest::fn;
using sdtest::rnd;
using V = std::vector<double>;

namespace {

double inner(const GridFunction& a, const GridFunction& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i] * a.grid->leaf_measure(i);
  return s;
}

HaarShiftSpec single(int depth) {
  HaarShiftSpec spec{1, 1, {{Cube{0, 0}, Cube{1, 0}, Cube{1, 1}, 1.0}}};
  spec.validate(depth);
  return spec;
}

// h_Q on a depth-n grid
GridFunction haar(int n, Cube q) {
  auto g = build_grid(n);
  V v(g->leaf_count(), 0.0);
  const double a = 1.0 / std::sqrt(q.length());
  const std::size_t b = g->leaf_begin(q), e = g->leaf_end(q);
  for (std::size_t x = b; x < e; ++x) v[x] = x < b + (e - b) / 2 ? a : -a;
  return GridFunction(g, v);
}

}  // namespace

TEST(HaarExpand, Examples) {
  for (const auto& level : haar_expand(fn({2, 2, 2, 2})))
    for (double c : level) EXPECT_EQ(c, 0.0);
  auto c = haar_expand(haar(3, Cube{0, 0}));
  EXPECT_EQ(c[0][0], 1.0);
  for (std::size_t k = 1; k < c.size(); ++k)
    for (double v : c[k]) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(haar_expand(fn({1, 3, 5, 7}))[0][0], -2.0);
}

TEST(HaarExpand, RejectsNonUniform) {
  GridFunction f(build_grid(1, V{0.25, 0.75}), V{1, 2});
  EXPECT_THROW(haar_expand(f), std::invalid_argument);
}

TEST(HaarExpand, Reconstruction) {
  auto f = rnd(8, 5);
  auto back = haar_synthesize(f.grid, f.integral(), haar_expand(f));
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(back[i], f[i], 1e-9 * (1 + std::fabs(f[i])));
}

TEST(Shift, ZeroIdentityAndSingle) {
  auto f = rnd(6, 3);
  HaarShiftSpec zero{0, 0, {}};
  for (double v : apply_shift(f, zero).values) EXPECT_EQ(v, 0.0);
  for (double v : shift_max_trunc(f, zero).values) EXPECT_EQ(v, 0.0);
  auto id = apply_shift(f, HaarShiftSpec::identity(6));
  const double mean = f.integral();
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(id[i], f[i] - mean, 1e-9 * (1 + std::fabs(f[i])));
  auto hs = haar(3, Cube{1, 1});
  auto out = apply_shift(haar(3, Cube{1, 0}), single(3));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(out[i], hs[i], 1e-12);
  auto mx = shift_max_trunc(haar(3, Cube{1, 0}), single(3));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(mx[i], std::fabs(hs[i]), 1e-12);
}

TEST(Shift, SpecValidation) {
  HaarShiftSpec bad{1, 0, {{Cube{0, 0}, Cube{2, 0}, Cube{0, 0}, 1.0}}};
  EXPECT_THROW(bad.validate(4), std::invalid_argument);
  HaarShiftSpec deep{0, 0, {{Cube{5, 0}, Cube{5, 0}, Cube{5, 0}, 1.0}}};
  EXPECT_THROW(deep.validate(4), std::invalid_argument);
  EXPECT_EQ(single(3).norm_bound(), 1.0);
}

// Sh* against a direct window enumeration of partial sums over outer levels
TEST(Shift, MaxTruncMatchesWindowEnumeration) {
  const int n = 5;
  auto f = rnd(n, 8);
  auto spec = HaarShiftSpec::random(n, 1, 0, 8);
  std::vector<GridFunction> layer;
  for (int k = 0; k < n; ++k) {
    HaarShiftSpec part{spec.t, spec.s, {}};
    for (const auto& a : spec.alpha)
      if (a.q.level == k) part.alpha.push_back(a);
    layer.push_back(apply_shift(f, part));
  }
  auto mx = shift_max_trunc(f, spec);
  for (std::size_t x = 0; x < f.size(); ++x) {
    double best = 0;
    for (int l = 0; l < n; ++l) {
      double s = 0;
      for (int m = l; m < n; ++m) {
        s += layer[m][x];
        best = std::max(best, std::fabs(s));
      }
    }
    EXPECT_NEAR(mx[x], best, 1e-9 * (1 + best));
  }
}

class HaarProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(HaarProperty, AdjointAndDomination) {
  const int n = 7;
  auto spec = HaarShiftSpec::random(n, 1, 2, GetParam());
  auto f = rnd(n, GetParam()), g = rnd(n, GetParam() + 50);
  EXPECT_NEAR(inner(apply_shift(f, spec), g), inner(f, apply_shift(g, spec.adjoint())),
              1e-9 * (1 + std::fabs(inner(f, f)) + std::fabs(inner(g, g))));
  auto sh = apply_shift(f, spec), mx = shift_max_trunc(f, spec);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LE(std::fabs(sh[i]), mx[i] * (1 + 1e-12) + 1e-12);
}

TEST_P(HaarProperty, NormEnvelope) {
  const int n = 7;
  auto spec = HaarShiftSpec::random(n, 0, 1, GetParam());
  ShiftOperator op(build_grid(n), spec);
  const double lin = measure_linear_norm(op, Cube{0, 0});
  EXPECT_GT(lin, 0.1 * spec.norm_bound());
  EXPECT_LT(lin, 8.0 * spec.norm_bound());
  EXPECT_GE(measure_maximal_norm(op, Cube{0, 0}), lin * (1 - 1e-6));
}

TEST_P(HaarProperty, LocalMedianBound) {
  const int n = 8;
  auto f = rnd(n, GetParam());
  for (auto [t, s] : {std::pair{0, 0}, {1, 0}}) {
    ShiftOperator op(build_grid(n), HaarShiftSpec::random(n, t, s, GetParam()));
    const double norm = measure_shift_norms(op, 50, 3).maximal_sup;
    const Ratio r{1, 2 * haar_c0(t, s)};
    EXPECT_TRUE(audit_local_median(f, op, norm, r).pass);
  }
}

TEST_P(HaarProperty, EnlargementGrowth) {
  auto g = build_grid(8);
  std::mt19937_64 rng(GetParam());
  std::vector<char> a(g->leaf_count(), 0);
  for (int i = 0; i < 6; ++i) a[rng() % a.size()] = 1;
  double base = 0;
  for (char c : a) base += c;
  for (int n = 1; n <= 3; ++n) {
    auto big = enlarge(*g, Cube{0, 0}, a, n);
    double m = 0;
    for (char c : big) m += c;
    EXPECT_LE(m, std::pow(3.0, n) * base);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, HaarProperty, ::testing::Range<std::uint64_t>(1, 11));
