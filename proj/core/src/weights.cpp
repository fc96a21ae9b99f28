#include "sparsedom/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

namespace {

void check_interval(double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0)) throw std::invalid_argument("weight interval outside [0,1)");
}

void check_q(double q) {
  if (!(q > 1.0)) throw std::invalid_argument("q must exceed 1");
}

// b^e - a^e without cancellation for nearby a, b.
double pow_diff(double a, double b, double e) {
  if (a == 0.0) return std::pow(b, e);
  return std::pow(a, e) * std::expm1(e * std::log(b / a));
}

double overlap(double a, double b, double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); }

}  // namespace

Weight Weight::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("weight must be positive");
  Weight w;
  w.scale = c;
  return w;
}

Weight Weight::flat_bump(double eps, double bump_end) {
  if (!(eps > 0.0) || !(bump_end > 0.0 && bump_end <= 1.0)) throw std::invalid_argument("bad flat bump");
  Weight w;
  w.kind = WeightKind::flat_bump;
  w.eps = eps;
  w.bump_end = bump_end;
  return w;
}

Weight Weight::power(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("power weight needs eps in (0,1]");
  Weight w;
  w.kind = WeightKind::power;
  w.eps = eps;
  return w;
}

Weight Weight::from_grid(std::vector<double> density) {
  const std::size_t n = density.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("grid weight needs 2^k cells");
  for (double d : density)
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("weight must be positive");
  Weight w;
  w.kind = WeightKind::grid;
  w.density = std::move(density);
  return w;
}

double Weight::mass(double a, double b) const {
  check_interval(a, b);
  switch (kind) {
    case WeightKind::constant:
      return scale * (b - a);
    case WeightKind::flat_bump:
      return scale * (eps * overlap(a, b, 0.0, bump_end) + overlap(a, b, bump_end, 1.0));
    case WeightKind::power:
      return scale * pow_diff(a, b, eps);
    case WeightKind::grid: {
      const double h = 1.0 / static_cast<double>(density.size());
      double m = 0.0;
      const auto first = static_cast<std::size_t>(std::floor(a / h));
      for (std::size_t c = first; c < density.size() && static_cast<double>(c) * h < b; ++c)
        m += density[c] * overlap(a, b, static_cast<double>(c) * h, static_cast<double>(c + 1) * h);
      return scale * m;
    }
  }
  return 0.0;
}

double Weight::dual_mass(double a, double b, double q) const {
  check_interval(a, b);
  check_q(q);
  const double e = -1.0 / (q - 1.0);
  switch (kind) {
    case WeightKind::constant:
      return std::pow(scale, e) * (b - a);
    case WeightKind::flat_bump:
      return std::pow(scale, e) * (std::pow(eps, e) * overlap(a, b, 0.0, bump_end) + overlap(a, b, bump_end, 1.0));
    case WeightKind::power: {
      // (scale eps)^e x^beta with beta = (1 - eps)/(q - 1)
      const double beta = (1.0 - eps) / (q - 1.0);
      return std::pow(scale * eps, e) * pow_diff(a, b, beta + 1.0) / (beta + 1.0);
    }
    case WeightKind::grid: {
      const double h = 1.0 / static_cast<double>(density.size());
      double m = 0.0;
      const auto first = static_cast<std::size_t>(std::floor(a / h));
      for (std::size_t c = first; c < density.size() && static_cast<double>(c) * h < b; ++c)
        m += std::pow(density[c], e) * overlap(a, b, static_cast<double>(c) * h, static_cast<double>(c + 1) * h);
      return std::pow(scale, e) * m;
    }
  }
  return 0.0;
}

std::string Weight::name() const {
  switch (kind) {
    case WeightKind::constant:
      return "constant";
    case WeightKind::flat_bump:
      return "flat-bump-eps";
    case WeightKind::power:
      return "power-eps";
    case WeightKind::grid:
      return "grid";
  }
  return "unknown";
}

std::vector<double> cell_masses(const Weight& w, int depth) {
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> out(n);
  const double h = std::ldexp(1.0, -depth);
  for (std::size_t c = 0; c < n; ++c) out[c] = w.mass(static_cast<double>(c) * h, static_cast<double>(c + 1) * h);
  return out;
}

std::vector<double> dual_cell_masses(const Weight& w, int depth, double q) {
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> out(n);
  const double h = std::ldexp(1.0, -depth);
  for (std::size_t c = 0; c < n; ++c)
    out[c] = w.dual_mass(static_cast<double>(c) * h, static_cast<double>(c + 1) * h, q);
  return out;
}

Characteristic aq_characteristic(const Weight& w, double q, CubeFamily family, int depth) {
  check_q(q);
  const std::size_t n = std::size_t{1} << depth;
  const double h = std::ldexp(1.0, -depth);
  Characteristic best{0.0, 0, n};
  auto eval = [&](std::size_t lo, std::size_t hi, double wm, double sm) {
    const double len = static_cast<double>(hi - lo) * h;
    const double sa = sm / len;
    const double v = (wm / len) * (q == 2.0 ? sa : std::pow(sa, q - 1.0));
    if (v > best.value) best = {v, lo, hi};
  };
  if (family == CubeFamily::dyadic) {
    // closed-form masses per dyadic cube, no prefix-sum cancellation
    for (int k = 0; k <= depth; ++k) {
      const std::size_t step = n >> k;
      for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
        const double a = std::ldexp(static_cast<double>(i), -k), b = std::ldexp(static_cast<double>(i + 1), -k);
        eval(i * step, (i + 1) * step, w.mass(a, b), w.dual_mass(a, b, q));
      }
    }
    return best;
  }
  auto wm = cell_masses(w, depth);
  auto sm = dual_cell_masses(w, depth, q);
  std::vector<double> pw(n + 1, 0.0), ps(n + 1, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    pw[c + 1] = pw[c] + wm[c];
    ps[c + 1] = ps[c] + sm[c];
  }
  for (std::size_t lo = 0; lo < n; ++lo)
    for (std::size_t hi = lo + 1; hi <= n; ++hi) eval(lo, hi, pw[hi] - pw[lo], ps[hi] - ps[lo]);
  return best;
}

double ainf_characteristic(const Weight& w, int depth) {
  const std::size_t n = std::size_t{1} << depth;
  const double h = std::ldexp(1.0, -depth);
  // avg[k][i] = <w> on the dyadic cube (k, i)
  std::vector<std::vector<double>> avg(depth + 1), mass(depth + 1);
  for (int k = 0; k <= depth; ++k) {
    avg[k].resize(std::size_t{1} << k);
    mass[k].resize(avg[k].size());
    for (std::size_t i = 0; i < avg[k].size(); ++i) {
      const double a = std::ldexp(static_cast<double>(i), -k), b = std::ldexp(static_cast<double>(i + 1), -k);
      mass[k][i] = w.mass(a, b);
      avg[k][i] = mass[k][i] / (b - a);
    }
  }
  // sup[k][x] = max over levels j >= k of the level-j average containing x
  std::vector<std::vector<double>> sup(depth + 1, std::vector<double>(n));
  for (std::size_t x = 0; x < n; ++x) sup[depth][x] = avg[depth][x];
  for (int k = depth - 1; k >= 0; --k)
    for (std::size_t x = 0; x < n; ++x) sup[k][x] = std::max(sup[k + 1][x], avg[k][x >> (depth - k)]);
  double best = 0.0;
  for (int k = 0; k <= depth; ++k) {
    const std::size_t step = n >> k;
    for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
      double integral = 0.0;
      for (std::size_t x = i * step; x < (i + 1) * step; ++x) integral += sup[k][x] * h;
      best = std::max(best, integral / mass[k][i]);
    }
  }
  return best;
}

double weighted_norm_cells(const std::vector<double>& f, const std::vector<double>& wmass, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (f.size() != wmass.size()) throw std::invalid_argument("weight and function differ in length");
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c)
    if (f[c] != 0.0) s += std::pow(std::fabs(f[c]), p) * wmass[c];
  return std::pow(s, 1.0 / p);
}

double weighted_norm(const std::vector<double>& f, const Weight& w, double p) {
  const std::size_t n = f.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("function needs 2^k cells");
  return weighted_norm_cells(f, cell_masses(w, std::countr_zero(n)), p);
}

DominationReport check_reverse_doubling(const Weight& w, double q, double aq, int depth, int pairs, std::uint64_t seed) {
  const std::size_t n = std::size_t{1} << depth;
  auto wm = cell_masses(w, depth);
  std::mt19937_64 rng(seed);
  DominationReport rep;
  rep.inequality = "reverse doubling: (|E|/|Q|)^q <= [w]_{A_q} w(E)/w(Q)";
  rep.proof_constant = 1.0;
  for (int it = 0; it < pairs; ++it) {
    std::size_t lo = rng() % n, hi = rng() % n;
    if (lo > hi) std::swap(lo, hi);
    ++hi;
    double wq = 0.0, we = 0.0;
    std::size_t ecount = 0;
    const std::uint64_t density = 1 + rng() % 7;  // keep probability density/8
    for (std::size_t c = lo; c < hi; ++c) {
      wq += wm[c];
      if (rng() % 8 < density) {
        we += wm[c];
        ++ecount;
      }
    }
    if (ecount == 0) continue;
    const double lhs = std::pow(static_cast<double>(ecount) / static_cast<double>(hi - lo), q);
    const double rhs = aq * we / wq;
    const double c = lhs / rhs;
    if (c > rep.best_constant) {
      rep.best_constant = c;
      rep.witness = lo;
    }
    // relative slack for rounding in the summed masses
    if (!(lhs <= rhs * (1.0 + 1e-9))) rep.pass = false;
  }
  rep.measured["Aq"] = aq;
  rep.measured["pairs"] = pairs;
  return rep;
}

WeightedSparseOutcome weighted_sparse_experiment(const SparseFamily& s, const GridFunction& f, const Weight& w,
                                                 double p, Ratio r, double q) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  check_q(q);
  require_same_grid(s.grid, f.grid);
  if (!f.grid->uniform()) throw std::invalid_argument("weighted experiment needs the uniform grid");
  const int depth = f.grid->depth();
  auto wm = cell_masses(w, depth);
  WeightedSparseOutcome out;
  out.aq = aq_characteristic(w, q, CubeFamily::dyadic, depth).value;
  GridFunction af = f.abs();
  const auto& g = *f.grid;
  for (const auto& cube : s.cubes()) {
    const double pr = percentile_on_cube(af, cube, r);
    double wq = 0.0;
    for (std::size_t x = g.leaf_begin(cube); x < g.leaf_end(cube); ++x) wq += wm[x];
    out.lhs += std::pow(pr, p) * wq;
  }
  const double fp = std::pow(weighted_norm_cells(f.values, wm, p), p);
  const double chain = std::pow(2.0 / r.value(), q) * std::pow(2.0, p);
  out.rhs = out.aq * chain * fp;
  auto& rep = out.report;
  rep.inequality = "weighted sparse: sum P^r_Q(|f|)^p w(Q) <= [w]_{A_q} (2/r)^q 2^p ||f||^p";
  rep.proof_constant = chain;
  rep.best_constant = ratio_or_inf(out.lhs, out.aq * fp);
  rep.pass = out.lhs <= out.rhs;
  const Ratio need{2 * r.den - r.num, 2 * r.den};
  auto sp = verify_sparsity(s, need);
  rep.measured["family_eta"] = sp.best_constant;
  rep.measured["required_eta"] = need.value();
  if (!sp.pass) rep.notes.push_back("family is not (1 - r/2)-sparse; ratio reported only");
  rep.measured["Aq"] = out.aq;
  rep.measured["p"] = p;
  rep.measured["q"] = q;
  rep.measured["r"] = r.value();
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs at least two points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

void fit(SlopeReport& rep) {
  std::vector<double> e, a, ratio;
  for (const auto& pt : rep.points) {
    e.push_back(pt.eps);
    a.push_back(pt.aq);
    ratio.push_back(pt.ratio);
  }
  rep.slope_ratio_vs_aq = loglog_slope(a, ratio);
  rep.slope_aq_vs_eps = loglog_slope(e, a);
}

}  // namespace

SlopeReport sharpness_flat(double p, Ratio r, double q, const std::vector<double>& eps_list, int depth) {
  const std::size_t n = std::size_t{1} << depth;
  const double bump = 2.0 * r.value();
  auto g = build_grid(depth);
  SlopeReport rep;
  for (double eps : eps_list) {
    Weight w = Weight::flat_bump(eps, bump);
    auto wm = cell_masses(w, depth);
    std::vector<double> f(n, 0.0);
    const double height = std::pow(eps, -1.0 / p);
    for (std::size_t c = 0; c < n; ++c)
      if ((static_cast<double>(c) + 0.5) / static_cast<double>(n) < bump) f[c] = height;
    const double pr = percentile_on_cube(GridFunction(g, f), Cube{0, 0}, r);
    double wq = 0.0;
    for (double m : wm) wq += m;
    SlopePoint pt;
    pt.eps = eps;
    pt.aq = aq_characteristic(w, q, CubeFamily::dyadic, depth).value;
    pt.ainf = ainf_characteristic(w, depth);
    pt.lhs = pr * std::pow(wq, 1.0 / p);
    pt.rhs = weighted_norm_cells(f, wm, p);
    pt.ratio = pt.lhs / pt.rhs;
    rep.points.push_back(pt);
  }
  fit(rep);
  return rep;
}

SlopeReport sharpness_power(double p, double t, double q, const std::vector<double>& eps_list, int depth) {
  SlopeReport rep;
  for (double eps : eps_list) {
    Weight w = Weight::power(eps);
    // sum_k k^{p/t} w([2^-k, 2^-(k-1))) with w(...) = 2^{-(k-1)eps}(1 - 2^{-eps})
    const double drop = -std::expm1(-eps * std::log(2.0));
    const auto terms = static_cast<std::int64_t>(std::ceil(64.0 / eps)) + 64;
    double s = 0.0;
    for (std::int64_t k = terms; k >= 1; --k)
      s += std::pow(static_cast<double>(k), p / t) * std::exp2(-static_cast<double>(k - 1) * eps) * drop;
    SlopePoint pt;
    pt.eps = eps;
    pt.aq = aq_characteristic(w, q, CubeFamily::dyadic, depth).value;
    pt.ainf = ainf_characteristic(w, depth);
    pt.lhs = std::pow(s, 1.0 / p);
    pt.rhs = std::pow(w.mass(0.0, 1.0), 1.0 / p);
    pt.ratio = pt.lhs / pt.rhs;
    rep.points.push_back(pt);
  }
  fit(rep);
  return rep;
}

SlopeReport haar_weighted_slope(const ShiftOperator& op, const GridFunction& f, double p, double q,
                                const std::vector<double>& eps_list) {
  const int depth = f.grid->depth();
  GridFunction sh = apply_shift(f, op.spec());
  GridFunction mf = doob_maximal(f);
  SlopeReport rep;
  for (double eps : eps_list) {
    Weight w = Weight::power(eps);
    auto wm = cell_masses(w, depth);
    SlopePoint pt;
    pt.eps = eps;
    pt.aq = aq_characteristic(w, q, CubeFamily::dyadic, depth).value;
    pt.ainf = ainf_characteristic(w, depth);
    pt.lhs = weighted_norm_cells(sh.values, wm, p);
    pt.rhs = weighted_norm_cells(mf.values, wm, p);
    pt.ratio = pt.lhs / pt.rhs;
    rep.points.push_back(pt);
  }
  fit(rep);
  return rep;
}

std::vector<double> default_eps_list() {
  std::vector<double> out;
  for (int k = 3; k <= 8; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

}  // namespace sparsedom
