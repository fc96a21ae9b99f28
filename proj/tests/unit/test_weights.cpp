#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "sparsedom/sparse_family.hpp"
#include "sparsedom/weights.hpp"

using namespace sparsedom;
using V = std::vector<double>;

TEST(Characteristic, ConstantWeight) {
  for (double q : {1.5, 2.0, 3.0}) {
    EXPECT_NEAR(aq_characteristic(Weight::constant(), q, CubeFamily::dyadic, 8).value, 1.0, 1e-12);
    EXPECT_NEAR(aq_characteristic(Weight::constant(3.0), q, CubeFamily::all_intervals, 6).value, 1.0, 1e-12);
  }
  EXPECT_NEAR(ainf_characteristic(Weight::constant(), 8), 1.0, 1e-12);
}

TEST(Characteristic, RejectsSmallQ) {
  EXPECT_THROW(aq_characteristic(Weight::constant(), 1.0, CubeFamily::dyadic, 4), std::invalid_argument);
  EXPECT_THROW(aq_characteristic(Weight::constant(), 0.5, CubeFamily::dyadic, 4), std::invalid_argument);
}

TEST(Characteristic, EpsSlopes) {
  const auto eps = default_eps_list();
  for (auto make : {+[](double e) { return Weight::flat_bump(e); }, +[](double e) { return Weight::power(e); }}) {
    V aq;
    for (double e : eps) aq.push_back(aq_characteristic(make(e), 2.0, CubeFamily::dyadic, 12).value);
    EXPECT_NEAR(loglog_slope(eps, aq), -1.0, 0.1) << make(0.5).name();
  }
}

TEST(Characteristic, Invariants) {
  for (const auto& w : {Weight::flat_bump(1.0 / 16), Weight::power(0.25), Weight::from_grid({1, 4, 2, 8, 1, 1, 3, 5})}) {
    auto scaled = w;
    scaled.scale = 7.0;
    const double a2 = aq_characteristic(w, 2.0, CubeFamily::dyadic, 8).value;
    const double a3 = aq_characteristic(w, 3.0, CubeFamily::dyadic, 8).value;
    const double all2 = aq_characteristic(w, 2.0, CubeFamily::all_intervals, 7).value;
    EXPECT_GE(a2, 1.0 - 1e-12) << w.name();
    EXPECT_LE(a3, a2 + 1e-9) << w.name();
    EXPECT_GE(all2 + 1e-9, aq_characteristic(w, 2.0, CubeFamily::dyadic, 7).value) << w.name();
    EXPECT_NEAR(aq_characteristic(scaled, 2.0, CubeFamily::dyadic, 8).value, a2, 1e-9 * a2) << w.name();
    const double ainf = ainf_characteristic(w, 8);
    EXPECT_GE(ainf, 1.0 - 1e-12);
    EXPECT_NEAR(ainf_characteristic(scaled, 8), ainf, 1e-9 * ainf);
    EXPECT_TRUE(check_reverse_doubling(w, 2.0, all2, 7, 200, 17).pass) << w.name();
  }
}

TEST(Characteristic, AinfBelowA2OnFlatBumps) {
  double worst = 0.0;
  for (double e : default_eps_list()) {
    auto w = Weight::flat_bump(e);
    worst = std::max(worst, ainf_characteristic(w, 10) / aq_characteristic(w, 2.0, CubeFamily::dyadic, 10).value);
  }
  EXPECT_LE(worst, 4.0);
}

TEST(WeightedNorm, Examples) {
  EXPECT_DOUBLE_EQ(weighted_norm(V(8, 1.0), Weight::constant(), 2.0), 1.0);
  const V f{1, -2, 3, 0};
  const auto w = Weight::flat_bump(0.25);
  for (double p : {0.5, 1.0, 2.0}) EXPECT_NEAR(weighted_norm(V{-3, 6, -9, 0}, w, p), 3.0 * weighted_norm(f, w, p), 1e-12);
  for (double p : {0.5, 1.0, 3.0}) EXPECT_NEAR(weighted_norm(V(64, 1.0), Weight::power(0.125), p), 1.0, 1e-12);
  EXPECT_THROW(weighted_norm(f, w, 0.0), std::invalid_argument);
}

TEST(WeightedNorm, PowerCellMassesSumToOne) {
  double total = 0.0;
  for (double m : cell_masses(Weight::power(1.0 / 256), 6)) {
    EXPECT_GT(m, 0.0);
    total += m;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(WeightedSparse, UnweightedChain) {
  const Ratio r{1, 2};
  const double q = 2.0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto f = sdtest::rnd(8, seed);
    auto s = random_sparse_family(f.grid, seed, Ratio{3, 4});
    auto out = weighted_sparse_experiment(s, f, Weight::constant(), 1.0, r, q);
    EXPECT_TRUE(out.report.pass) << seed;
    EXPECT_DOUBLE_EQ(out.aq, 1.0);
    EXPECT_LE(out.report.best_constant, std::pow(2.0 / r.value(), q) * 2.0);
  }
}

TEST(Sharpness, Slopes) {
  const auto eps = default_eps_list();
  auto flat = sharpness_flat(2.0, Ratio{1, 4}, 2.0, eps, 12);
  EXPECT_NEAR(flat.slope_ratio_vs_aq, 0.5, 0.1);
  auto power = sharpness_power(2.0, 1.0, 2.0, eps, 12);
  EXPECT_NEAR(power.slope_ratio_vs_aq, 1.0, 0.15);
  EXPECT_EQ(power.points.size(), eps.size());
}

TEST(Slope, LeastSquares) {
  EXPECT_NEAR(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}), 2.0, 1e-12);
  EXPECT_NEAR(loglog_slope({1, 2, 4}, {1, 0.5, 0.25}), -1.0, 1e-12);
}
