#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "sparsedom/biparam.hpp"
#include "sparsedom/extract.hpp"
#include "sparsedom/io.hpp"

using namespace sparsedom;
using sdtest::rnd;

TEST(Base64, RoundTrip) {
  EXPECT_EQ(base64_encode({}), "");
  EXPECT_EQ(base64_encode({'f', 'o', 'o'}), "Zm9v");
  EXPECT_EQ(base64_encode({'f', 'o'}), "Zm8=");
  for (std::size_t n = 0; n < 40; ++n) {
    std::vector<std::uint8_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(i * 37 + 11);
    EXPECT_EQ(base64_decode(base64_encode(b)), b) << n;
  }
  EXPECT_ANY_THROW(base64_decode("Zm9"));
}

TEST(Codec, GridFunction) {
  auto f = rnd(6, 3);
  EXPECT_EQ(grid_function_from_json(to_json(f)).values, f.values);
  EXPECT_EQ(grid_function_from_csv(to_csv(f)).values, f.values);
  EXPECT_ANY_THROW(grid_function_from_json("{\"depth\": 2, \"values\": [1, 2, 3]}"));
}

TEST(Codec, SignsAndShift) {
  auto g = build_grid(5);
  auto s = PredictableSigns::rademacher(g, 9);
  EXPECT_EQ(signs_from_json(to_json(s), g).values, s.values);
  auto spec = HaarShiftSpec::random(5, 1, 2, 4);
  auto back = haar_spec_from_json(to_json(spec));
  EXPECT_EQ(back.t, spec.t);
  EXPECT_EQ(back.s, spec.s);
  ASSERT_EQ(back.alpha.size(), spec.alpha.size());
  for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
    EXPECT_EQ(back.alpha[i].q, spec.alpha[i].q);
    EXPECT_EQ(back.alpha[i].t, spec.alpha[i].t);
    EXPECT_EQ(back.alpha[i].s, spec.alpha[i].s);
    EXPECT_EQ(back.alpha[i].value, spec.alpha[i].value);
  }
}

TEST(Codec, Families) {
  auto g = build_grid(7);
  auto s = random_sparse_family(g, 5, Ratio{1, 2});
  EXPECT_EQ(family_from_json(to_json(s), g).cubes(), s.cubes());

  ProductGrid pg{2, 2};
  std::vector<double> f(pg.cells());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = double(i % 5) - 2.0;
  auto greedy = extract_greedy(rectangle_family(pg, f));
  // 2 x 2 product cells have the same uniform masses as a depth-4 grid
  auto g4 = build_grid(4);
  auto flat = SparseFamily::adapted(g4);
  flat.flat = greedy.family;
  auto back = family_from_json(to_json(flat), g4);
  ASSERT_TRUE(back.is_flat());
  ASSERT_EQ(back.flat->sets.size(), greedy.family.sets.size());
  for (std::size_t i = 0; i < greedy.family.sets.size(); ++i) {
    EXPECT_EQ(back.flat->sets[i].cells, greedy.family.sets[i].cells);
    EXPECT_EQ(back.flat->witnesses[i], greedy.family.witnesses[i]);
  }
}

TEST(Codec, ReportWithInfinity) {
  DominationReport r;
  r.inequality = "x <= y";
  r.best_constant = INFINITY;
  r.witness = 7;
  r.proof_constant = 2.0;
  r.pass = false;
  r.measured["a"] = -1.5;
  r.notes = {"n1"};
  auto back = report_from_json(to_json(r));
  EXPECT_EQ(back.inequality, r.inequality);
  EXPECT_TRUE(std::isinf(back.best_constant));
  EXPECT_EQ(back.witness, 7u);
  EXPECT_EQ(back.proof_constant, 2.0);
  EXPECT_FALSE(back.pass);
  EXPECT_EQ(back.measured, r.measured);
  EXPECT_EQ(back.notes, r.notes);
  r.proof_constant.reset();
  EXPECT_FALSE(report_from_json(to_json(r)).proof_constant.has_value());
}

TEST(Codec, WeightKernelLine) {
  for (const auto& w : {Weight::power(0.125), Weight::flat_bump(0.25), Weight::constant(2.0),
                        Weight::from_grid({1, 2, 3, 4})}) {
    auto back = weight_from_json(to_json(w));
    EXPECT_EQ(cell_masses(back, 4), cell_masses(w, 4)) << w.name();
  }
  auto k = kernel_from_json(to_json(CZKernelSpec::smoothed_power(2.0, 0.5)));
  EXPECT_EQ(k.kind, KernelKind::smoothed_power);
  EXPECT_DOUBLE_EQ(k.s, 2.0);
  EXPECT_DOUBLE_EQ(k.kernel(0.3), CZKernelSpec::smoothed_power(2.0, 0.5).kernel(0.3));

  LineFunction f(LineGrid(-1.0, 1.0, 16));
  f.add_indicator(0.0, 0.5, 3.0);
  auto lf = line_function_from_csv(to_csv(f));
  EXPECT_EQ(lf.values, f.values);
  EXPECT_EQ(lf.grid.m, f.grid.m);
}

TEST(Codec, Product) {
  ProductGrid pg{2, 1};
  std::vector<double> f{1, 2, 3, 4, 5, 6, 7, 8};
  ProductGrid back;
  EXPECT_EQ(product_from_csv(product_to_csv(pg, f), back), f);
  EXPECT_EQ(back.n1, 2);
  EXPECT_EQ(back.n2, 1);
  auto csv = rectangles_to_csv(enumerate_rectangles(pg, f));
  EXPECT_EQ(csv.rfind("k1,i1,k2,i2,average", 0), 0u);
}

TEST(Generators, NamesAndExactness) {
  for (const auto& name : generator_names()) {
    auto f = generate_function(name, 6, 11);
    EXPECT_EQ(f.size(), 64u) << name;
  }
  auto a = generate_function("random-heavy", 6, 2), b = generate_function("random-heavy", 6, 2);
  EXPECT_EQ(a.values, b.values);
  for (double v : a.values) EXPECT_EQ(std::fabs(v), std::exp2(std::round(std::log2(std::fabs(v)))));
  for (double v : generate_function("random-signed", 6, 4).values) EXPECT_EQ(v, std::round(v));
  EXPECT_ANY_THROW(generate_function("nope", 4, 1));
}
