#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sparsedom/cz.hpp"
#include "sparsedom/dyadic.hpp"
#include "sparsedom/line.hpp"
#include "sparsedom/smooth_maximal.hpp"

using namespace sparsedom;

namespace {

LineGrid grid(int depth) { return LineGrid(-2.0, 2.0, std::size_t{1} << depth); }

LineFunction pieces(const LineGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(-1000, 1000);
  LineFunction f(g);
  for (int k = 0; k < 16; ++k) f.add_indicator(k / 16.0, (k + 1) / 16.0, u(rng) / 1000.0);
  return f;
}

// m_Q as a percentile of M^s_{3Q} f over Q = [0, 1)
double level(const LineFunction& f, const SmoothBumpDictionary& d, Ratio r) {
  SmoothMaximal table(f, d);
  auto [lo, hi] = f.grid.cells(0.0, 1.0);
  const std::size_t len = hi - lo;
  auto ms3 = table.local(lo - len, hi + len);
  std::vector<double> ms(ms3.begin() + static_cast<std::ptrdiff_t>(len), ms3.begin() + static_cast<std::ptrdiff_t>(2 * len));
  return percentile_uniform(ms, r);
}

}  // namespace

TEST(Hilbert, ZeroAndClosedForm) {
  const auto g = grid(9);
  for (double v : hilbert_transform(LineFunction(g)).values) EXPECT_EQ(v, 0.0);
  LineFunction ind(g);
  ind.add_indicator(0.0, 1.0, 1.0);
  auto h = hilbert_transform(ind);
  for (std::size_t i = 0; i < g.m; ++i) {
    const double x = g.mid(i), want = std::log(std::fabs(x / (x - 1.0)));
    EXPECT_NEAR(h[i], want, 1e-6 * std::max(1.0, std::fabs(want))) << x;
  }
}

TEST(Hilbert, Antisymmetry) {
  const auto g = grid(8);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto f = pieces(g, seed), k = pieces(g, seed + 50);
    const double a = pairing(hilbert_transform(f), k), b = pairing(f, hilbert_transform(k));
    EXPECT_NEAR(a, -b, 1e-8 * std::fabs(a));
  }
}

TEST(Hilbert, JumpLogGrowth) {
  const auto g = grid(12);
  LineFunction f(g);
  f.add_indicator(0.0, 1.0, 1.0);
  auto h = hilbert_transform(f);
  std::vector<double> x, y;
  for (double t : {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8}) {
    const auto i = g.cell_of(-t);
    x.push_back(std::log(1.0 / std::fabs(g.mid(i))));
    y.push_back(std::fabs(h[i]));
  }
  // |Hf| tracks log(1/|x|) with unit slope near the jump
  const double slope = (y.front() - y.back()) / (x.front() - x.back());
  EXPECT_NEAR(slope, 1.0, 0.05);
}

TEST(Kernel, HilbertConstants) {
  auto kc = check_kernel(CZKernelSpec::hilbert(1.0));
  EXPECT_TRUE(kc.pass);
  EXPECT_LE(kc.measured_ck, CZKernelSpec::hilbert(1.0).ck);
  EXPECT_GT(kc.samples, 0u);
}

TEST(Dictionary, Validity) {
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    auto dc = validate_dictionary(SmoothBumpDictionary(s, 8));
    EXPECT_TRUE(dc.pass) << s;
    EXPECT_LE(dc.worst, 1.0) << s;
  }
}

TEST(SmoothMaximalFn, BoundsAndMonotone) {
  const auto g = grid(8);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto f = pieces(g, seed);
    auto m0 = smooth_maximal(f, SmoothBumpDictionary(0.0, 1));
    auto m1 = smooth_maximal(f, SmoothBumpDictionary(1.0, 8));
    auto m2 = smooth_maximal(f, SmoothBumpDictionary(2.0, 8));
    for (std::size_t i = 0; i < g.m; ++i) {
      EXPECT_LE(m1[i], f.sup_abs() + 1e-12);
      EXPECT_LE(m2[i], m1[i] + 1e-12);
      EXPECT_LE(m1[i], m0[i] + 1e-12);
    }
  }
}

TEST(SmoothMaximalFn, LargerDictionaryNeverLower) {
  auto f = pieces(grid(8), 3);
  auto a = smooth_maximal(f, SmoothBumpDictionary(1.0, 8));
  auto b = smooth_maximal(f, SmoothBumpDictionary(1.0, 32));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_GE(b[i] + 1e-15, a[i]);
}

TEST(CZDecomp, HighThresholdIsTrivial) {
  const auto g = grid(8);
  auto f = pieces(g, 2);
  SmoothBumpDictionary d(1.0, 8);
  auto cz = smooth_cz_decomposition(f, d, 0.0, 1.0, 2.0 * f.sup_abs());
  EXPECT_TRUE(cz.bad.empty());
  for (std::size_t i = 0; i < g.m; ++i) EXPECT_EQ(cz.g[i], f[i]);
}

TEST(CZDecomp, SpikeAndRandom) {
  const auto g = grid(10);
  SmoothBumpDictionary d(1.0, 8);
  LineFunction spike(g);
  spike.add_indicator(0.5, 0.5 + g.h(), 1000.0);
  auto cz = smooth_cz_decomposition(spike, d, 0.0, 1.0, level(spike, d, Ratio{1, 32}));
  EXPECT_FALSE(cz.bad.empty());
  EXPECT_LE(cz.max_bad_integral, 1e-10);
  EXPECT_LE(cz.reconstruction_error, 1e-10);
  EXPECT_TRUE(cz.whitney_ok);
  EXPECT_LE(cz.overlap, 12u);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto f = pieces(g, seed);
    auto c = smooth_cz_decomposition(f, d, 0.0, 1.0, level(f, d, Ratio{1, 4}));
    EXPECT_LE(c.reconstruction_error, 1e-10);
    EXPECT_LE(c.max_bad_integral, 1e-10);
    EXPECT_TRUE(c.whitney_ok);
  }
}

TEST(CZDecomp, ThresholdTooSmallThrows) {
  const auto g = grid(8);
  auto f = pieces(g, 1);
  EXPECT_THROW(smooth_cz_decomposition(f, SmoothBumpDictionary(1.0, 8), 0.0, 1.0, 1e-12), std::invalid_argument);
}

TEST(Whitney, CoverAndOverlap) {
  std::vector<char> omega(64, 0);
  for (std::size_t i = 20; i < 37; ++i) omega[i] = 1;
  auto w = whitney_decomposition(omega);
  double covered = 0.0;
  for (const auto& r : w) {
    EXPECT_GE(r.lo, 20.0);
    EXPECT_LE(r.hi, 37.0);
    covered += r.length();
  }
  EXPECT_NEAR(covered, 17.0, 1e-3);
  EXPECT_LE(whitney_overlap(w), 12u);
}

TEST(CZO, ZeroFunctionEmptyFamily) {
  auto res = czo_extract_sparse(LineFunction(grid(8)), CZKernelSpec::hilbert(1.0), SmoothBumpDictionary(1.0, 8), 0.0, 1.0);
  EXPECT_EQ(res.family.size(), 0u);
  EXPECT_TRUE(res.domination.pass);
}

TEST(CZO, HaarAtom) {
  const auto g = grid(10);
  LineFunction f(g);
  f.add_indicator(0.0, 0.5, 1.0);
  f.add_indicator(0.5, 1.0, -1.0);
  auto res = czo_extract_sparse(f, CZKernelSpec::hilbert(1.0), SmoothBumpDictionary(1.0, 8), 0.0, 1.0);
  EXPECT_GT(res.family.size(), 0u);
  EXPECT_LE(res.family.size(), 64u);
  EXPECT_TRUE(res.domination.pass);
  EXPECT_TRUE(res.sparsity.pass);
  EXPECT_DOUBLE_EQ(res.r.value(), 1.0 / 32);
}

TEST(HilbertSharpness, SlopeAndMoments) {
  auto h = hilbert_sharpness_experiment(1.0, 1.0, 2.0, {0.125, 0.0625, 0.03125}, 8, 1024);
  EXPECT_EQ(h.m, 0);
  EXPECT_LE(h.moment_error, 1e-10);
  EXPECT_GT(h.slope, 0.5);
  EXPECT_LE(h.ms_spread, 1.5);
}

TEST(HilbertSharpness, RejectsBadExponents) {
  EXPECT_THROW(hilbert_sharpness_experiment(0.25, 1.0, 2.0, {0.125, 0.0625}), std::invalid_argument);
  EXPECT_THROW(hilbert_sharpness_experiment(1.0, 1.0, 1.0, {0.125, 0.0625}), std::invalid_argument);
}
