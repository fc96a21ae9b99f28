#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "sparsedom/biparam.hpp"
#include "sparsedom/counterexample.hpp"
#include "sparsedom/dyadic.hpp"
#include "sparsedom/extract.hpp"
#include "sparsedom/sparse_family.hpp"

using namespace sparsedom;
using sdtest::fn;
using sdtest::rnd;
using V = std::vector<double>;

namespace {

SparseFamily chain(int depth) {
  auto s = SparseFamily::adapted(build_grid(depth));
  for (int k = 0; k <= depth; ++k) s.add(Cube{k, 0});
  return s;
}

FlatFamily hand_family() {
  FlatFamily e;
  e.cell_measure = {0.5, 0.5};
  e.sets = {{{0}, 1.0, "[0,1/2)"}, {{0, 1}, 0.5, "[0,1)"}, {{1}, 0.0, "[1/2,1)"}};
  return e;
}

}  // namespace

TEST(Sparsity, Examples) {
  auto one = SparseFamily::adapted(build_grid(3));
  one.add(Cube{0, 0});
  auto r1 = verify_sparsity(one, Ratio{99, 100});
  EXPECT_TRUE(r1.pass);
  EXPECT_DOUBLE_EQ(r1.best_constant, 1.0);

  auto c = chain(6);
  auto half = verify_sparsity(c, Ratio{1, 2});
  EXPECT_TRUE(half.pass);
  EXPECT_DOUBLE_EQ(half.best_constant, 0.5);
  EXPECT_FALSE(verify_sparsity(c, Ratio{51, 100}).pass);
}

TEST(Sparsity, RepeatedCubeFails) {
  auto s = SparseFamily::adapted(build_grid(2));
  s.add(Cube{0, 0});
  s.levels.resize(2);
  s.levels[1] = {0, 1};  // S_1 covers [0,1) as well
  auto rep = verify_sparsity(s, Ratio{1, 100});
  EXPECT_FALSE(rep.pass);
  EXPECT_DOUBLE_EQ(rep.best_constant, 0.0);
}

TEST(Sparsity, StoppingTimeRoundTrip) {
  auto c = chain(5);
  auto nus = to_stopping_times(c);
  ASSERT_FALSE(nus.empty());
  for (const auto& nu : nus) EXPECT_TRUE(nu.adapted());
  EXPECT_EQ(nus[0].level[0], 0);
  auto back = from_stopping_times(c.grid, nus);
  EXPECT_EQ(back.cubes(), c.cubes());
  auto seq = check_sparse_sequence(nus, Ratio{1, 2});
  EXPECT_TRUE(seq.pass);
  EXPECT_DOUBLE_EQ(seq.best_constant, 0.5);
}

class SparseProperty : public ::testing::TestWithParam<int> {};

TEST_P(SparseProperty, RandomFamilyRoundTrip) {
  auto g = build_grid(8);
  auto s = random_sparse_family(g, GetParam(), Ratio{1, 2});
  EXPECT_TRUE(verify_sparsity(s, Ratio{1, 2}).pass);
  auto nus = to_stopping_times(s);
  EXPECT_EQ(from_stopping_times(g, nus).cubes(), s.cubes());
  EXPECT_TRUE(check_sparse_sequence(nus, Ratio{1, 2}).pass);
}

TEST_P(SparseProperty, LayeredDomination) {
  auto f = rnd(8, GetParam());
  auto res = extract_layered(f);
  EXPECT_TRUE(verify_sparsity(res.family, Ratio{1, 2}).pass);
  for (Ratio r : {Ratio{1, 4}, Ratio{1, 2}}) {
    auto a = audit_layered(f, res.family, r);
    EXPECT_TRUE(a.pass) << "r = " << r.value() << " constant " << a.best_constant;
    EXPECT_LE(a.best_constant, 2.0);
  }
}

TEST_P(SparseProperty, SparseOperatorsAndMaximalBound) {
  auto g = build_grid(8);
  auto f = rnd(8, GetParam());
  auto s = random_sparse_family(g, GetParam() + 100, Ratio{1, 2});
  auto a = apply_sparse(f, s, SparseMode::sum_A);
  auto m = apply_sparse(f, s, SparseMode::max_M);
  for (std::size_t x = 0; x < f.size(); ++x) EXPECT_LE(m[x], a[x] + 1e-9);
  // ||A_S f||_1 <= 2 ||M f||_1 for a 1/2-sparse family
  const double lhs = a.lp_norm_pow(1.0), rhs = doob_maximal(f).lp_norm_pow(1.0);
  EXPECT_LE(lhs, 2.0 * rhs + 1e-9);
}

TEST_P(SparseProperty, CancellativeBelowSum) {
  auto g = build_grid(7);
  auto f = rnd(7, GetParam());
  auto s = random_sparse_family(g, GetParam(), Ratio{1, 2});
  auto c = apply_sparse(f, s, SparseMode::cancellative_C, Ratio{1, 2});
  for (double v : c.values) EXPECT_GE(v, 0.0);
  // P^r_Q(|f - <f>_Q|) <= ||f||_inf + |<f>_Q| <= 2 ||f||_inf on each cube
  auto ones = apply_sparse(GridFunction::constant(g, 1.0), s, SparseMode::sum_A);
  for (std::size_t x = 0; x < c.size(); ++x) EXPECT_LE(c[x], 2.0 * f.sup_abs() * ones[x] + 1e-9);
}

TEST_P(SparseProperty, GreedyIntervals) {
  auto f = rnd(5, GetParam());
  auto e = interval_family(f, 5);
  auto res = extract_greedy(e);
  EXPECT_TRUE(verify_flat_sparsity(res.family, Ratio{1, 2}).pass);
  auto aud = audit_greedy(f.values, e, res.family);
  EXPECT_TRUE(aud.pass) << aud.best_constant;
  EXPECT_LE(aud.best_constant, 1.0 + 1e-12);
}

TEST_P(SparseProperty, StoppingExtraction) {
  auto f = rnd(7, GetParam());
  auto g = f.grid;
  for (auto op : {StoppingOperator::transform, StoppingOperator::square}) {
    auto res = extract_stopping(f, op, PredictableSigns::rademacher(g, GetParam()));
    EXPECT_TRUE(res.node_bound.pass);
    EXPECT_TRUE(res.sequence.pass);
    EXPECT_TRUE(res.domination.pass);
    for (const auto& nu : res.nus) EXPECT_TRUE(nu.adapted());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SparseProperty, ::testing::Range(1, 11));

TEST(Layered, Examples) {
  auto ones = extract_layered(GridFunction::constant(build_grid(4), 1.0));
  EXPECT_EQ(ones.family.cubes(), (std::vector<Cube>{Cube{0, 0}}));

  auto zero = extract_layered(GridFunction::zeros(build_grid(4)));
  EXPECT_EQ(zero.family.size(), 0u);
  EXPECT_TRUE(audit_layered(GridFunction::zeros(build_grid(4)), zero.family).pass);

  auto f = fn({1, 0});
  auto res = extract_layered(f);
  EXPECT_TRUE(res.family.contains(Cube{0, 0}));
  EXPECT_TRUE(audit_layered(f, res.family).pass);
}

TEST(Greedy, HandTrace) {
  auto e = hand_family();
  auto res = extract_greedy(e);
  EXPECT_EQ(res.accepted, (std::vector<std::size_t>{0, 1}));
  ASSERT_EQ(res.trace.size(), 3u);
  EXPECT_DOUBLE_EQ(res.trace[0].gamma, 0.0);
  EXPECT_DOUBLE_EQ(res.trace[1].gamma, 0.5);
  EXPECT_DOUBLE_EQ(res.trace[2].gamma, 1.0);
  EXPECT_FALSE(res.trace[2].accepted);
}

TEST(Greedy, SingleAndZero) {
  FlatFamily one;
  one.cell_measure = {1.0};
  one.sets = {{{0}, 3.0, "Q0"}};
  EXPECT_EQ(extract_greedy(one).accepted.size(), 1u);

  auto e = hand_family();
  for (auto& s : e.sets) s.value = 0.0;
  auto res = extract_greedy(e);
  // equal keys keep input order: [0,1/2), then [0,1) (gamma 1/2), [1/2,1) is shadowed
  EXPECT_EQ(res.accepted, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(audit_greedy({0.0, 0.0}, e, res.family).pass);
}

TEST(Stopping, ConstantFunction) {
  auto g = build_grid(5);
  auto res = extract_stopping(GridFunction::constant(g, 2.0), StoppingOperator::transform,
                              PredictableSigns::constant(g, 1.0), Ratio{1, 10});
  EXPECT_EQ(res.nodes.size(), 1u);
  EXPECT_EQ(res.nodes[0].cube, (Cube{0, 0}));
  EXPECT_TRUE(res.domination.pass);
}

TEST(HaarExtraction, IdentityOnAtom) {
  const int n = 5;
  auto g = build_grid(n);
  V v(g->leaf_count(), 0.0);
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = x < v.size() / 2 ? 1.0 : -1.0;
  auto spec = HaarShiftSpec::identity(n);
  ShiftOperator op(g, spec);
  auto res = extract_haar_shift(GridFunction(g, v), op, 1.0, Cube{0, 0});
  EXPECT_EQ(res.family.cubes(), (std::vector<Cube>{Cube{0, 0}}));
  EXPECT_TRUE(res.domination.pass);
  EXPECT_LE(res.domination.best_constant, 10.0);
}

TEST(SparseOperators, Examples) {
  auto f = fn({1, 3, 5, 7});
  auto empty = SparseFamily::adapted(f.grid);
  for (auto mode : {SparseMode::sum_A, SparseMode::max_M, SparseMode::cancellative_C})
    for (double v : apply_sparse(f, empty, mode).values) EXPECT_EQ(v, 0.0);

  auto root = SparseFamily::adapted(f.grid);
  root.add(Cube{0, 0});
  for (double v : apply_sparse(f, root, SparseMode::sum_A).values) EXPECT_DOUBLE_EQ(v, 4.0);
  for (double v : apply_sparse(f, root, SparseMode::max_M).values) EXPECT_DOUBLE_EQ(v, 4.0);
  for (double v : apply_sparse(f, root, SparseMode::cancellative_C, Ratio{1, 2}).values) EXPECT_DOUBLE_EQ(v, 3.0);
}

TEST(Domination, Examples) {
  auto d = check_domination(V{2, 0}, V{1, 1}, 3.0);
  EXPECT_DOUBLE_EQ(d.best_constant, 2.0);
  EXPECT_EQ(d.witness, 0u);
  EXPECT_TRUE(d.pass);
  EXPECT_FALSE(check_domination(V{2, 0}, V{1, 1}, 1.5).pass);
  EXPECT_DOUBLE_EQ(check_domination(V{0, 0}, V{0, 0}, 1.0).best_constant, 0.0);
  EXPECT_TRUE(std::isinf(check_domination(V{1}, V{0}, std::nullopt).best_constant));
}

TEST(Counterexample, TNExamples) {
  auto f = GridFunction::constant(build_grid(0), 1.0);
  for (int n : {3, 4, 5}) {
    auto tf = build_TN(f, n, 8.0);
    auto chk = check_TN(f, tf, n, 8.0);
    EXPECT_TRUE(chk.property1) << n;
    EXPECT_TRUE(chk.property2) << n;
    EXPECT_TRUE(chk.property3) << n;
    EXPECT_GE(chk.min_ratio, 8.0);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto g = rnd(2, seed);
    auto chk = check_TN(g, build_TN(g, 4, 8.0), 4, 8.0);
    EXPECT_TRUE(chk.property1 && chk.property2 && chk.property3) << seed;
  }
}

TEST(Counterexample, ForcedSetsDecrease) {
  auto r0 = counterexample_sequence(0, 4, 8.0, 1.0);
  EXPECT_DOUBLE_EQ(r0.audit.best_sparsity, 1.0);
  double prev = r0.audit.best_sparsity;
  for (int n = 1; n <= 2; ++n) {
    auto r = counterexample_sequence(n, 4, 8.0, 1.0);
    EXPECT_LT(r.audit.best_sparsity, prev) << n;
    prev = r.audit.best_sparsity;
  }
}
