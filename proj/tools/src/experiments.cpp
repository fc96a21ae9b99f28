#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "sparsedom/biparam.hpp"
#include "sparsedom/counterexample.hpp"
#include "sparsedom/cz.hpp"
#include "sparsedom/dyadic.hpp"
#include "sparsedom/extract.hpp"
#include "sparsedom/haar_shift.hpp"
#include "sparsedom/io.hpp"
#include "sparsedom/smooth_maximal.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom::tools {

namespace {

using Checks = std::vector<DominationReport>;

// Runs fn(rep) for rep in [0, reps) on a pool; results stay in rep order.
template <class R>
std::vector<R> run_pool(int reps, int threads, const std::function<R(int)>& fn) {
  std::vector<R> out(static_cast<std::size_t>(reps));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (int i = next++; i < reps; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, std::max(1, reps));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

Checks run_checks(const ExperimentConfig& c, const std::function<Checks(std::uint64_t)>& fn) {
  auto per = run_pool<Checks>(*c.reps, c.threads, [&](int rep) { return fn(c.seed + static_cast<std::uint64_t>(rep)); });
  return merge_reps(per, c.seed);
}

DominationReport reported(std::string name, double value) {
  DominationReport r;
  r.inequality = std::move(name);
  r.best_constant = value;
  r.pass = !std::isnan(value);
  return r;
}

DominationReport finite_check(DominationReport r) {
  r.pass = r.pass && std::isfinite(r.best_constant);
  if (!r.proof_constant) r.notes.push_back("no proof constant; passes when finite");
  return r;
}

DominationReport flag_check(std::string name, bool ok) {
  DominationReport r;
  r.inequality = std::move(name);
  r.best_constant = ok ? 0.0 : 1.0;
  r.proof_constant = 0.0;
  r.pass = ok;
  return r;
}

DominationReport lower_check(std::string name, double value, double bound) {
  DominationReport r;
  r.inequality = std::move(name);
  r.best_constant = value;
  r.proof_constant = bound;
  r.pass = value >= bound;
  r.notes.push_back("lower bound: passes when best_constant >= proof_constant");
  return r;
}

// Odd seeds draw heavy-tailed values so that stopping and extraction recurse below the root.
GridFunction random_signed(int depth, std::uint64_t seed) {
  return generate_function(seed % 2 ? "random-heavy" : "random-signed", depth, seed);
}

// Worst r mu{P_r f > l} / mu{|f| > l} over attained l on a uniform grid.
double weak_type_constant(const GridFunction& f, const GridFunction& pf, Ratio r) {
  std::vector<double> a = pf.values, b;
  for (double v : f.values) b.push_back(std::fabs(v));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i + 1 < a.size() && a[i + 1] == a[i]) continue;
    const auto above_p = static_cast<double>(a.size() - (std::upper_bound(a.begin(), a.end(), a[i]) - a.begin()));
    const auto above_f = static_cast<double>(b.size() - (std::upper_bound(b.begin(), b.end(), a[i]) - b.begin()));
    worst = std::max(worst, ratio_or_inf(r.value() * above_p, above_f));
  }
  return worst;
}

void resolve(ExperimentConfig& c, int depth, int reps) {
  if (!c.depth) c.depth = depth;
  if (!c.reps) c.reps = reps;
}

// ---- dyadic experiments ----

ExperimentReport percentile_weak_type(ExperimentConfig c) {
  resolve(c, 10, 200);
  std::vector<Ratio> rs{{1, 10}, {1, 4}, {1, 2}};
  if (c.r) rs = {*c.r};
  ExperimentReport rep{c.id, c};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    Checks out;
    for (Ratio r : rs) {
      auto pf = percentile_maximal(f, r);
      auto w = check_percentile_weak_type(f, pf, r);
      DominationReport d;
      d.inequality = "mu{P_r f > l} <= (1/r) mu{|f| > l}, r = " + ratio_string(r);
      d.proof_constant = 1.0;
      d.best_constant = weak_type_constant(f, pf, r);
      d.pass = w.pass;
      d.measured["r"] = r.value();
      if (!w.pass) d.measured["violating_lambda"] = w.worst_lambda;
      out.push_back(std::move(d));
    }
    return out;
  });
  return rep;
}

ExperimentReport layered_domination(ExperimentConfig c) {
  resolve(c, 10, 200);
  ExperimentReport rep{c.id, c};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    auto lr = extract_layered(f);
    auto sp = verify_sparsity(lr.family, Ratio{1, 2});
    sp.measured["layers"] = lr.layers;
    sp.measured["family_size"] = static_cast<double>(lr.family.size());
    return Checks{sp, audit_layered(f, lr.family, Ratio{1, 2})};
  });
  return rep;
}

ExperimentReport theorem_b(ExperimentConfig c) {
  resolve(c, 8, 100);
  ExperimentReport rep{c.id, c};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    const double mf = doob_maximal(f).lp_norm_pow(1.0);
    auto s = random_sparse_family(f.grid, seed, Ratio{1, 2});
    const double as = apply_sparse(f, s, SparseMode::sum_A).lp_norm_pow(1.0);
    auto upper = check_domination(std::vector<double>{as}, std::vector<double>{mf}, 2.0,
                                  "||A_S f||_1 <= 2 ||M f||_1, S random 1/2-sparse");
    upper.measured["family_size"] = static_cast<double>(s.size());
    auto lr = extract_layered(f);
    const double al = apply_sparse(f, lr.family, SparseMode::sum_A).lp_norm_pow(1.0);
    auto lower = check_domination(std::vector<double>{mf}, std::vector<double>{al}, 4.0,
                                  "||M f||_1 <= 4 ||A_S f||_1, S layered");
    return Checks{upper, verify_sparsity(s, Ratio{1, 2}), lower};
  });
  return rep;
}

// ---- greedy and biparameter ----

Checks greedy_checks(const std::vector<double>& f, FlatFamily e) {
  auto gr = extract_greedy(e);
  auto dom = audit_greedy(f, e, gr.family);
  dom.measured["input_sets"] = static_cast<double>(e.sets.size());
  dom.measured["selected_sets"] = static_cast<double>(gr.family.sets.size());
  auto sp = verify_flat_sparsity(gr.family, Ratio{1, 2});
  return Checks{dom, sp};
}

ExperimentReport greedy_domination(ExperimentConfig c) {
  resolve(c, 6, 20);
  ExperimentReport rep{c.id, c};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    return greedy_checks(f.values, interval_family(f, *c.depth));
  });
  return rep;
}

ExperimentReport biparam_strong_max(ExperimentConfig c) {
  resolve(c, 6, 2);
  ExperimentReport rep{c.id, c};
  ProductGrid pg{*c.depth, *c.depth};
  rep.summary["rectangles"] = std::pow(std::ldexp(1.0, *c.depth + 1) - 1.0, 2.0);
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> u(-1000, 1000);
    std::vector<double> f(pg.cells());
    for (auto& v : f) v = u(rng);
    return greedy_checks(f, rectangle_family(pg, f));
  });
  return rep;
}

// ---- martingale operators ----

ExperimentReport stopping(ExperimentConfig c, StoppingOperator op) {
  resolve(c, 8, 100);
  ExperimentReport rep{c.id, c};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    auto sigma = PredictableSigns::rademacher(f.grid, seed);
    auto res = extract_stopping(f, op, sigma, c.r);
    auto dom = finite_check(res.domination);
    dom.measured["r"] = res.r.value();
    return Checks{res.node_bound, res.sequence, dom, audit_median_bound(f, sigma, op, res.r)};
  });
  return rep;
}

ExperimentReport haar_shift_domination(ExperimentConfig c) {
  resolve(c, 10, 100);
  ExperimentReport rep{c.id, c};
  std::vector<HaarShiftSpec> specs;
  if (!c.operator_path.empty()) {
    specs.push_back(haar_spec_from_json(read_file(c.operator_path)));
  } else if (c.t || c.s) {
    if (!c.t || !c.s || *c.t != std::floor(*c.t) || *c.s != std::floor(*c.s))
      throw ConfigError("haar-shift-domination needs integer t and s together");
    specs.push_back(HaarShiftSpec::random(*c.depth, static_cast<int>(*c.t), static_cast<int>(*c.s), c.seed));
  } else {
    for (auto [t, s] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 2}})
      specs.push_back(HaarShiftSpec::random(*c.depth, t, s, c.seed));
  }
  Table norms{"shift_norms", {"t", "s", "linear", "maximal_sup", "norm_bound"}, {}};
  std::vector<std::pair<ShiftOperator, double>> ops;
  for (auto& spec : specs) {
    try {
      spec.validate(*c.depth);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("operator: ") + e.what());
    }
    ShiftOperator op(build_grid(*c.depth), spec);
    auto nm = measure_shift_norms(op);
    norms.rows.push_back({double(spec.t), double(spec.s), nm.linear, nm.maximal_sup, spec.norm_bound()});
    ops.emplace_back(std::move(op), nm.maximal_sup);
  }
  rep.tables.push_back(norms);
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    Checks out;
    for (const auto& [op, norm] : ops) {
      auto res = extract_haar_shift(f, op, norm, Cube{0, 0});
      const std::string tag = " (t,s) = (" + std::to_string(op.spec().t) + "," + std::to_string(op.spec().s) + ")";
      res.sparsity.inequality += tag;
      res.child_bound.inequality += tag;
      auto dom = finite_check(res.domination);
      dom.inequality += tag;
      auto med = audit_local_median(f, op, norm, res.r);
      med.inequality += tag;
      out.insert(out.end(), {res.sparsity, res.child_bound, dom, med});
    }
    return out;
  });
  return rep;
}

ExperimentReport cs_lp_bound(ExperimentConfig c) {
  resolve(c, 10, 200);
  if (!c.r) c.r = Ratio{1, 2};
  std::vector<double> ps{0.5, 1.0};
  if (c.p) ps = {*c.p};
  const Ratio r = *c.r;
  ExperimentReport rep{c.id, c};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    auto s = random_sparse_family(f.grid, seed, Ratio{1, 2});
    auto cs = apply_sparse(f, s, SparseMode::cancellative_C, r);
    Checks out;
    for (double p : ps) {
      auto d = check_domination(std::vector<double>{cs.lp_norm_pow(p)}, std::vector<double>{f.lp_norm_pow(p)},
                                8.0 / (r.value() * r.value()),
                                "||C_S f||_p^p <= 8 r^-2 ||f||_p^p, p = " + std::to_string(p));
      d.measured["p"] = p;
      d.measured["r"] = r.value();
      out.push_back(std::move(d));
    }
    return out;
  });
  return rep;
}

ExperimentReport counterexample(ExperimentConfig c) {
  resolve(c, 2, 20);
  if (!c.n) c.n = 2;
  const double c0 = 1.0, a = 8.0 * c0;
  ExperimentReport rep{c.id, c};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    Checks out;
    for (int n : {3, 4, 5}) {
      auto tf = build_TN(f, n, a);
      auto chk = check_TN(f, tf, n, a);
      const std::string tag = ", N = " + std::to_string(n);
      auto p1 = flag_check("T_N (1): |<T f>_J| >= A |<f>_I| on D'_N" + tag, chk.property1);
      p1.measured["min_ratio_over_A"] = chk.min_ratio / a;
      out.push_back(p1);
      out.push_back(flag_check("T_N (2): <T f>_[0,2^-k) = 0" + tag, chk.property2));
      out.push_back(flag_check("T_N (3): <T f>_I = <f>_I" + tag, chk.property3));
    }
    return out;
  });
  Table forced{"forced_sets", {"n", "forced", "carleson", "best_sparsity"}, {}};
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (int n = 0; n <= *c.n; ++n) {
    auto res = counterexample_sequence(n, 4, a, c0);
    forced.rows.push_back({double(n), double(res.audit.forced.size()), res.audit.carleson, res.audit.best_sparsity});
    auto d = reported("forced-set sparsity ratio, n = " + std::to_string(n) + ", per-layer N = 4, A = 8 C0",
                      res.audit.best_sparsity);
    d.measured["forced"] = static_cast<double>(res.audit.forced.size());
    d.measured["carleson"] = res.audit.carleson;
    if (n == 0) {
      d.proof_constant = 1.0;
      d.pass = res.audit.best_sparsity == 1.0;
    }
    decreasing = decreasing && res.audit.best_sparsity < prev;
    prev = res.audit.best_sparsity;
    rep.checks.push_back(d);
  }
  if (*c.n > 0) rep.checks.push_back(flag_check("forced-set sparsity strictly decreasing in n", decreasing));
  rep.tables.push_back(forced);
  return rep;
}

// ---- weights ----

ExperimentReport weighted_sparse(ExperimentConfig c) {
  resolve(c, 8, 20);
  if (!c.r) c.r = Ratio{1, 2};
  if (!c.p) c.p = 1.0;
  if (!c.q) c.q = 2.0;
  std::vector<Weight> weights;
  if (!c.weight_path.empty()) {
    try {
      weights.push_back(weight_from_json(read_file(c.weight_path)));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("weight: ") + e.what());
    }
  } else {
    weights.push_back(Weight::constant());
    for (double eps : default_eps_list()) weights.push_back(Weight::flat_bump(eps));
    for (double eps : default_eps_list()) weights.push_back(Weight::power(eps));
  }
  const Ratio r = *c.r;
  const Ratio eta{2 * r.den - r.num, 2 * r.den};
  ExperimentReport rep{c.id, c};
  Table t{"weighted_sparse", {"eps", "Aq", "lhs", "rhs", "ratio"}, {}};
  rep.checks = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_signed(*c.depth, seed);
    auto s = random_sparse_family(f.grid, seed, eta);
    Checks out{verify_sparsity(s, eta)};
    for (const auto& w : weights) {
      auto o = weighted_sparse_experiment(s, f, w, *c.p, r, *c.q);
      o.report.inequality += ", w = " + w.name();
      out.push_back(o.report);
    }
    return out;
  });
  // per-point data from the base seed
  auto f = random_signed(*c.depth, c.seed);
  auto s = random_sparse_family(f.grid, c.seed, eta);
  for (const auto& w : weights) {
    auto o = weighted_sparse_experiment(s, f, w, *c.p, r, *c.q);
    t.rows.push_back({w.kind == WeightKind::constant ? 1.0 : w.eps, o.aq, o.lhs, o.rhs, ratio_or_inf(o.lhs, o.rhs)});
  }
  rep.tables.push_back(t);
  return rep;
}

Table slope_table(const SlopeReport& s) {
  Table t{"slope", {"eps", "Aq", "lhs", "rhs", "Ainf", "ratio"}, {}};
  for (const auto& p : s.points) t.rows.push_back({p.eps, p.aq, p.lhs, p.rhs, p.ainf, p.ratio});
  return t;
}

ExperimentReport weighted_sharpness(ExperimentConfig c, bool flat) {
  resolve(c, 12, 1);
  if (!c.p) c.p = 1.0;
  if (!c.q) c.q = 2.0;
  // the bump is [0, 2r), so r = 1/2 would make the weight constant
  if (flat && !c.r) c.r = Ratio{1, 4};
  if (flat && !(c.r->value() < 0.5)) throw ConfigError("weighted-sharpness-flat needs r < 1/2");
  if (!flat && !c.t) c.t = 1.0;
  ExperimentReport rep{c.id, c};
  const auto eps = default_eps_list();
  SlopeReport s = flat ? sharpness_flat(*c.p, *c.r, *c.q, eps, *c.depth) : sharpness_power(*c.p, *c.t, *c.q, eps, *c.depth);
  const double target = flat ? 1.0 / *c.p : 1.0 / *c.t;
  const double tol = flat ? 0.1 : 0.15;
  rep.checks.push_back(tolerance_check(
      flat ? "fitted exponent of ratio vs [w]_Aq equals 1/p" : "fitted exponent of ratio vs [w]_Aq equals 1/t",
      s.slope_ratio_vs_aq, target, tol));
  rep.checks.push_back(tolerance_check("[w_eps]_Aq slope in eps equals -1", s.slope_aq_vs_eps, -1.0, 0.1));
  rep.summary["slope_ratio_vs_aq"] = s.slope_ratio_vs_aq;
  rep.summary["slope_aq_vs_eps"] = s.slope_aq_vs_eps;
  rep.tables.push_back(slope_table(s));
  return rep;
}

// ---- Euclidean bench ----

constexpr double kHalfWidth = 2.0;

LineGrid line_grid(int depth) { return LineGrid(-kHalfWidth, kHalfWidth, std::size_t{1} << depth); }

// 16 pieces on Q0 = [0, 1), values k / 1000 with k uniform in [-1000, 1000].
LineFunction random_line_function(const LineGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(-1000, 1000);
  LineFunction f(g);
  for (int k = 0; k < 16; ++k) f.add_indicator(k / 16.0, (k + 1) / 16.0, u(rng) / 1000.0);
  return f;
}

double m_q(const LineFunction& f, const SmoothBumpDictionary& d, Ratio r = {1, 32}) {
  SmoothMaximal table(f, d);
  auto [lo, hi] = f.grid.cells(0.0, 1.0);
  const std::size_t len = hi - lo;
  auto ms3 = table.local(lo - len, hi + len);
  std::vector<double> ms(ms3.begin() + static_cast<std::ptrdiff_t>(len), ms3.begin() + static_cast<std::ptrdiff_t>(2 * len));
  return percentile_uniform(ms, r);
}

void require_line_depth(const ExperimentConfig& c) {
  if (*c.depth < 6 || *c.depth > 13) throw ConfigError("depth must be in [6, 13] for the line experiments");
}

ExperimentReport hilbert_sharpness(ExperimentConfig c) {
  resolve(c, 12, 1);
  if (!c.p) c.p = 1.0;
  if (!c.s) c.s = 1.0;
  if (!c.q) c.q = 2.0;
  if (!(*c.s > 0.0) || !(*c.s > 1.0 / *c.p - 1.0)) throw ConfigError("hilbert-sharpness needs s > 0 and s > 1/p - 1");
  ExperimentReport rep{c.id, c};
  const auto eps = default_eps_list();
  SmoothBumpDictionary dict(*c.s, 8);
  auto dv = validate_dictionary(dict);
  rep.checks.push_back(bound_check("dictionary F_s derivative and Holder bounds", dv.worst, 1.0));
  auto h = hilbert_sharpness_experiment(*c.p, *c.s, *c.q, eps, 8, std::size_t{1} << *c.depth);
  rep.checks.push_back(lower_check("fitted exponent of ||Hf|| / ||M^s f|| vs [w]_Aq", h.slope, 0.8));
  rep.checks.push_back(bound_check("max / min of ||M^s f||_Lp(w) over eps", h.ms_spread, 1.5));
  rep.checks.push_back(bound_check("vanishing moments up to order m", h.moment_error, 1e-10));
  std::vector<double> aq;
  Table t{"slope", {"eps", "Aq", "lhsnorm", "rhsnorm", "ratio"}, {}};
  for (const auto& p : h.points) {
    aq.push_back(p.aq);
    t.rows.push_back({p.eps, p.aq, p.h_norm, p.ms_norm, p.ratio});
  }
  const double aq_slope = loglog_slope(eps, aq);
  rep.checks.push_back(tolerance_check("[w_eps]_Aq slope in eps equals -1", aq_slope, -1.0, 0.1));
  rep.summary["slope"] = h.slope;
  rep.summary["m"] = h.m;
  rep.summary["dictionary_size"] = 8;
  rep.tables.push_back(t);
  return rep;
}

ExperimentReport czo_pipeline(ExperimentConfig c) {
  resolve(c, 10, 20);
  require_line_depth(c);
  if (!c.s) c.s = 1.0;
  if (*c.s <= 0.0) throw ConfigError("czo-pipeline needs s > 0");
  ExperimentReport rep{c.id, c};
  const LineGrid g = line_grid(*c.depth);
  const auto kernel = CZKernelSpec::hilbert(*c.s);
  const SmoothBumpDictionary dict(*c.s, 8);

  auto kc = check_kernel(kernel);
  auto kr = bound_check("kernel size / smoothness constants within declared C_K", kc.measured_ck, kernel.ck);
  kr.measured["samples"] = static_cast<double>(kc.samples);
  rep.checks.push_back(kr);
  rep.checks.push_back(bound_check("dictionary F_s derivative and Holder bounds", validate_dictionary(dict).worst, 1.0));

  // closed form on 1_(0,1): exact primitives, so only rounding remains
  LineFunction ind(g);
  ind.add_indicator(0.0, 1.0, 1.0);
  auto hi = hilbert_transform(ind);
  double err = 0.0;
  for (std::size_t i = 0; i < g.m; ++i) {
    const double x = g.mid(i);
    err = std::max(err, std::fabs(hi[i] - hilbert_indicator(0.0, 1.0, x)));
  }
  rep.checks.push_back(bound_check("H 1_(0,1) against log|x| - log|x-1| at midpoints", err, 1e-6));

  auto per = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_line_function(g, seed);
    auto f2 = random_line_function(g, seed ^ 0x9e3779b97f4a7c15ULL);
    const double a = pairing(hilbert_transform(f), f2), b = pairing(f, hilbert_transform(f2));
    auto anti = bound_check("<Hf, g> = -<f, Hg> (relative)", std::fabs(a + b) / std::max(std::fabs(a), 1e-300), 1e-8);

    // the level-1/32 threshold often leaves Omega empty, so a lower threshold and a spike are decomposed too
    LineFunction spike(g);
    const double h = g.h(), x = 0.5 + h * static_cast<double>(seed % 64);
    spike.add_indicator(x, x + h, 1000.0);
    const std::vector<std::pair<std::string, CZDecomposition>> parts{
        {"r32", smooth_cz_decomposition(f, dict, 0.0, 1.0, m_q(f, dict))},
        {"r4", smooth_cz_decomposition(f, dict, 0.0, 1.0, m_q(f, dict, Ratio{1, 4}))},
        {"spike", smooth_cz_decomposition(spike, dict, 0.0, 1.0, m_q(spike, dict))}};
    auto rec = bound_check("f = g + sum b_j", 0.0, 1e-10);
    auto mean = bound_check("int b_j = 0", 0.0, 1e-10);
    bool whitney = true;
    double overlap = 0.0;
    auto gr = reported("||g||_inf / m_Q", parts[0].second.g_ratio);
    for (const auto& [tag, cz] : parts) {
      rec.best_constant = std::max(rec.best_constant, cz.reconstruction_error);
      mean.best_constant = std::max(mean.best_constant, cz.max_bad_integral);
      whitney = whitney && cz.whitney_ok;
      overlap = std::max(overlap, static_cast<double>(cz.overlap));
      rec.measured["bad_parts_" + tag] = static_cast<double>(cz.bad.size());
      gr.measured["g_ratio_" + tag] = cz.g_ratio;
      gr.measured["c_ratio_" + tag] = cz.c_ratio;
      gr.measured["partition_defect_" + tag] = cz.partition_defect;
    }
    rec.pass = rec.best_constant <= 1e-10;
    mean.pass = mean.best_constant <= 1e-10;
    auto whit = flag_check("Whitney: l(R) <= dist(R, complement) <= 4 l(R)", whitney);
    auto over = bound_check("overlap of (9/8) R_j", overlap, 12.0);

    auto res = czo_extract_sparse(f, kernel, dict, 0.0, 1.0);
    auto dom = res.domination;
    dom.measured["nodes"] = static_cast<double>(res.nodes.size());
    return Checks{anti, rec, mean, whit, over, gr, res.sparsity, dom, res.eston, res.sharp};
  });
  rep.checks.insert(rep.checks.end(), per.begin(), per.end());
  rep.summary["r"] = 1.0 / 32.0;
  rep.summary["dictionary_size"] = static_cast<double>(dict.size());
  rep.summary["cells"] = static_cast<double>(g.m);
  return rep;
}

ExperimentReport eston_audit(ExperimentConfig c) {
  resolve(c, 10, 50);
  require_line_depth(c);
  if (!c.s) c.s = 1.0;
  if (*c.s <= 0.0) throw ConfigError("estonTF-audit needs s > 0");
  ExperimentReport rep{c.id, c};
  const LineGrid g = line_grid(*c.depth), g2 = g.refined();
  const auto kernel = CZKernelSpec::hilbert(*c.s);
  const SmoothBumpDictionary d8(*c.s, 8), d16(*c.s, 16), d32(*c.s, 32);
  constexpr int kQDepth = 5;
  auto per = run_checks(c, [&](std::uint64_t seed) {
    auto f = random_line_function(g, seed);
    auto f2 = f.refined();
    auto a8 = qgrid_audit(f, kernel, d8, 0.0, 1.0, kQDepth);
    auto a16 = qgrid_audit(f, kernel, d16, 0.0, 1.0, kQDepth);
    auto a32 = qgrid_audit(f, kernel, d32, 0.0, 1.0, kQDepth);
    auto b8 = qgrid_audit(f2, kernel, d8, 0.0, 1.0, kQDepth);
    auto e1 = finite_check(reported("P^2r_Q(|T f1_3Q|) <= C_audit (1/r) P^r_Q(M^s_3Q f), M", a8.eston));
    auto e2 = finite_check(reported("P^2r_Q(|T f1_3Q|) <= C_audit (1/r) P^r_Q(M^s_3Q f), 2M", b8.eston));
    auto s1 = finite_check(reported("M#_Q f <= C M^s_3Q f over the Q-grid, M", a8.sharp));
    auto s2 = finite_check(reported("M#_Q f <= C M^s_3Q f over the Q-grid, 2M", b8.sharp));
    e1.measured["cubes"] = static_cast<double>(a8.cubes);
    e1.measured["witness_level"] = a8.eston_witness.level;
    s1.measured["witness_level"] = a8.sharp_witness.level;
    auto mono = flag_check("audit constants nonincreasing over dictionary sizes 8/16/32",
                           a32.eston <= a16.eston && a16.eston <= a8.eston && a32.sharp <= a16.sharp &&
                               a16.sharp <= a8.sharp);
    mono.measured["eston_16"] = a16.eston;
    mono.measured["eston_32"] = a32.eston;
    mono.measured["sharp_16"] = a16.sharp;
    mono.measured["sharp_32"] = a32.sharp;
    // threshold at level 1/4 so that Omega is nonempty and g differs from f
    auto c1 = smooth_cz_decomposition(f, d8, 0.0, 1.0, m_q(f, d8, Ratio{1, 4}));
    auto c2 = smooth_cz_decomposition(f2, d8, 0.0, 1.0, m_q(f2, d8, Ratio{1, 4}));
    auto g1 = reported("||g||_inf / m_Q (m_Q at level 1/4), M", c1.g_ratio);
    g1.measured["bad_parts"] = static_cast<double>(c1.bad.size());
    auto g2r = reported("||g||_inf / m_Q (m_Q at level 1/4), 2M", c2.g_ratio);
    g2r.measured["bad_parts"] = static_cast<double>(c2.bad.size());
    return Checks{e1, e2, s1, s2, mono, g1, g2r};
  });
  rep.checks = per;
  auto stability = [&](const std::string& name, std::size_t i) {
    const double v1 = per[i].best_constant, v2 = per[i + 1].best_constant;
    auto t = tolerance_check(name + " at 2M / at M", v2 / v1, 1.0, 0.2);
    t.measured["at_M"] = v1;
    t.measured["at_2M"] = v2;
    rep.checks.push_back(t);
    rep.summary[name + "_M"] = v1;
    rep.summary[name + "_2M"] = v2;
  };
  stability("C_audit", 0);
  stability("C_sharp", 2);
  stability("g_ratio", 5);
  rep.summary["r"] = 1.0 / 32.0;
  rep.summary["dictionary_size"] = 8;
  rep.summary["cells"] = static_cast<double>(g.m);
  return rep;
}

using Runner = std::function<ExperimentReport(ExperimentConfig)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"percentile-weak-type", percentile_weak_type},
      {"layered-domination", layered_domination},
      {"theoremB", theorem_b},
      {"greedy-domination", greedy_domination},
      {"stopping-mt", [](ExperimentConfig c) { return stopping(std::move(c), StoppingOperator::transform); }},
      {"stopping-sf", [](ExperimentConfig c) { return stopping(std::move(c), StoppingOperator::square); }},
      {"haar-shift-domination", haar_shift_domination},
      {"cs-lp-bound", cs_lp_bound},
      {"counterexample", counterexample},
      {"biparam-strong-max", biparam_strong_max},
      {"weighted-sparse", weighted_sparse},
      {"weighted-sharpness-flat", [](ExperimentConfig c) { return weighted_sharpness(std::move(c), true); }},
      {"weighted-sharpness-power", [](ExperimentConfig c) { return weighted_sharpness(std::move(c), false); }},
      {"hilbert-sharpness", hilbert_sharpness},
      {"czo-pipeline", czo_pipeline},
      {"estonTF-audit", eston_audit},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : registry()) out.push_back(id);
    return out;
  }();
  return ids;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  for (const auto& [id, fn] : registry()) {
    if (id != config.id) continue;
    ExperimentReport rep = fn(config);
    rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& d) { return d.pass; });
    return rep;
  }
  throw ConfigError("unknown experiment id '" + config.id + "'");
}

std::vector<DominationReport> merge_reps(const std::vector<std::vector<DominationReport>>& reps,
                                         std::uint64_t base_seed) {
  std::vector<DominationReport> out;
  if (reps.empty()) return out;
  out = reps.front();
  for (auto& d : out) d.measured["worst_seed"] = static_cast<double>(base_seed);
  for (std::size_t i = 1; i < reps.size(); ++i) {
    if (reps[i].size() != out.size()) throw std::logic_error("repetitions returned different check lists");
    for (std::size_t j = 0; j < out.size(); ++j) {
      auto& m = out[j];
      const auto& d = reps[i][j];
      if (d.best_constant > m.best_constant || (std::isnan(d.best_constant) && !std::isnan(m.best_constant))) {
        m.best_constant = d.best_constant;
        m.witness = d.witness;
        m.measured["worst_seed"] = static_cast<double>(base_seed + i);
      }
      m.pass = m.pass && d.pass;
      for (const auto& [k, v] : d.measured) {
        auto it = m.measured.find(k);
        if (it == m.measured.end()) m.measured[k] = v;
        else if (k != "worst_seed") it->second = std::max(it->second, v);
      }
      for (const auto& n : d.notes)
        if (std::find(m.notes.begin(), m.notes.end(), n) == m.notes.end()) m.notes.push_back(n);
    }
  }
  for (auto& d : out) d.measured["reps"] = static_cast<double>(reps.size());
  return out;
}

DominationReport tolerance_check(std::string name, double value, double target, double tol) {
  DominationReport r;
  r.inequality = std::move(name);
  r.best_constant = std::fabs(value - target);
  r.proof_constant = tol;
  r.pass = r.best_constant <= tol;
  r.measured["value"] = value;
  r.measured["target"] = target;
  return r;
}

DominationReport bound_check(std::string name, double value, double bound) {
  DominationReport r;
  r.inequality = std::move(name);
  r.best_constant = value;
  r.proof_constant = bound;
  r.pass = value <= bound;
  return r;
}

}  // namespace sparsedom::tools
