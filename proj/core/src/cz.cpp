#include "sparsedom/cz.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

using boost::math::quadrature::gauss_kronrod;

double cutoff_psi(double x) {
  const double a = std::fabs(x);
  if (a <= 0.5) return 1.0;
  if (a >= 0.5625) return 0.0;
  const double t = (a - 0.5) * 16.0;
  const double e1 = std::exp(-1.0 / t), e2 = std::exp(-1.0 / (1.0 - t));
  return e2 / (e1 + e2);
}

namespace {

double integrate(const auto& fn, double a, double b) {
  if (!(b > a)) return 0.0;
  return gauss_kronrod<double, 15>::integrate(fn, a, b, 10, 1e-13);
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace

CellProfile cutoff_cell_averages(const LineGrid& g, double center, double length) {
  const double reach = 0.5625 * length;
  const double x0 = std::max(g.a, center - reach), x1 = std::min(g.b, center + reach);
  CellProfile p;
  if (!(x1 > x0)) return p;
  const double h = g.h();
  p.lo = static_cast<std::size_t>(std::floor((x0 - g.a) / h));
  const auto hi = std::min(g.m, static_cast<std::size_t>(std::ceil((x1 - g.a) / h)));
  auto psi = [&](double x) { return cutoff_psi((x - center) / length); };
  for (std::size_t c = p.lo; c < hi; ++c) {
    const double l = g.left(c), r = l + h;
    if (l >= center - 0.5 * length && r <= center + 0.5 * length)
      p.values.push_back(1.0);
    else
      p.values.push_back(integrate(psi, std::max(l, center - reach), std::min(r, center + reach)) / h);
  }
  return p;
}

std::vector<WhitneyInterval> whitney_decomposition(const std::vector<char>& omega, int min_level) {
  std::vector<WhitneyInterval> out;
  const std::size_t n = omega.size();
  std::size_t i = 0;
  while (i < n) {
    if (!omega[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && omega[j]) ++j;
    const double A = static_cast<double>(i), B = static_cast<double>(j);
    const double mid = 0.5 * (A + B);
    auto dist = [&](double t) { return std::min(t - A, B - t); };
    // explicit stack keeps the left-to-right order
    struct Node {
      int level;
      std::int64_t k;
    };
    const int top = log2_exact(j - i);
    std::vector<Node> stack;
    const std::int64_t k0 = static_cast<std::int64_t>(i) >> top;
    const std::int64_t k1 = (static_cast<std::int64_t>(j) + (std::int64_t{1} << top) - 1) >> top;
    for (std::int64_t k = k1 - 1; k >= k0; --k) stack.push_back({top, k});
    while (!stack.empty()) {
      Node nd = stack.back();
      stack.pop_back();
      const double len = std::ldexp(1.0, nd.level);
      const double lo = std::ldexp(static_cast<double>(nd.k), nd.level), hi = lo + len;
      if (hi <= A || lo >= B) continue;
      const bool inside = lo >= A && hi <= B;
      if (inside) {
        const double dmin = std::min(lo - A, B - hi);
        const double dmax = (lo <= mid && mid <= hi) ? 0.5 * (B - A) : std::max(dist(lo), dist(hi));
        if (dmax > 2 * len && dmin <= 4 * len) {
          out.push_back({lo, hi, dmin});
          continue;
        }
        if (nd.level <= min_level) continue;
      }
      stack.push_back({nd.level - 1, 2 * nd.k + 1});
      stack.push_back({nd.level - 1, 2 * nd.k});
    }
    i = j;
  }
  return out;
}

std::size_t whitney_overlap(const std::vector<WhitneyInterval>& w) {
  std::vector<std::pair<double, int>> ev;
  for (const auto& r : w) {
    const double e = r.length() / 16.0;
    ev.push_back({r.lo - e, 1});
    ev.push_back({r.hi + e, -1});
  }
  // open intervals: a closing end at the same point goes first
  std::sort(ev.begin(), ev.end());
  int cur = 0, best = 0;
  for (const auto& [x, d] : ev) {
    cur += d;
    best = std::max(best, cur);
  }
  return static_cast<std::size_t>(best);
}

CZDecomposition smooth_cz_decomposition(const LineFunction& f, const SmoothBumpDictionary& d, double q0, double q1,
                                        double m_q) {
  const double len = q1 - q0;
  auto [lo3, hi3] = f.grid.cells(q0 - len, q1 + len);
  SmoothMaximal table(f, d);
  auto ms = table.local(lo3, hi3);
  CZDecomposition out;
  out.threshold = m_q;
  out.omega.assign(f.size(), 0);
  std::size_t count = 0;
  for (std::size_t c = lo3; c < hi3; ++c)
    if (ms[c - lo3] > m_q) {
      out.omega[c] = 1;
      ++count;
    }
  if (count == hi3 - lo3) throw std::invalid_argument("Omega covers 3Q: the threshold m_Q is too small, increase it");

  auto w = whitney_decomposition(out.omega);
  std::sort(w.begin(), w.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  out.overlap = whitney_overlap(w);
  for (const auto& r : w)
    out.whitney_ok &= r.dist >= r.length() * (1 - 1e-12) && r.dist <= 4 * r.length() * (1 + 1e-12);

  auto psi_r = [&](std::size_t k, double t) { return cutoff_psi((t - w[k].center()) / w[k].length()); };
  auto support = [&](std::size_t k) {
    const double e = 0.5625 * w[k].length();
    return std::pair{w[k].center() - e, w[k].center() + e};
  };
  const std::ptrdiff_t window = 64;
  std::vector<double> covered(f.size(), 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto [s0, s1] = support(j);
    std::vector<std::size_t> nb;
    const auto lo = static_cast<std::ptrdiff_t>(j) - window, hi = static_cast<std::ptrdiff_t>(j) + window;
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, lo); i <= hi && i < static_cast<std::ptrdiff_t>(w.size()); ++i) {
      auto [t0, t1] = support(static_cast<std::size_t>(i));
      if (t0 < s1 && t1 > s0) nb.push_back(static_cast<std::size_t>(i));
    }
    auto eta = [&](double t) {
      const double own = psi_r(j, t);
      if (own == 0.0) return 0.0;
      double sum = 0.0;
      for (auto i : nb) sum += psi_r(i, t);
      return own / sum;
    };
    BadPart bp;
    bp.r = w[j];
    bp.cell_lo = static_cast<std::size_t>(std::floor(s0));
    const auto cell_hi = static_cast<std::size_t>(std::ceil(s1));
    double num = 0.0, den = 0.0;
    for (std::size_t c = bp.cell_lo; c < cell_hi; ++c) {
      const double e = integrate(eta, std::max(s0, static_cast<double>(c)), std::min(s1, static_cast<double>(c + 1)));
      bp.eta.push_back(e);
      num += f[c] * e;
      den += e;
    }
    bp.c = den > 0 ? num / den : 0.0;
    double integral = 0.0;
    for (std::size_t c = bp.cell_lo; c < cell_hi; ++c) {
      const double e = bp.eta[c - bp.cell_lo];
      bp.b.push_back((f[c] - bp.c) * e);
      integral += bp.b.back();
      covered[c] += e;
    }
    bp.integral = integral * f.grid.h();
    out.max_bad_integral = std::max(out.max_bad_integral, std::fabs(bp.integral));
    out.bad.push_back(std::move(bp));
  }

  out.g = f;
  std::vector<double> bsum(f.size(), 0.0);
  for (const auto& bp : out.bad)
    for (std::size_t c = 0; c < bp.b.size(); ++c) {
      out.g[bp.cell_lo + c] -= bp.b[c];
      bsum[bp.cell_lo + c] += bp.b[c];
    }
  for (std::size_t c = 0; c < f.size(); ++c) {
    out.reconstruction_error = std::max(out.reconstruction_error, std::fabs(f[c] - out.g[c] - bsum[c]));
    if (out.omega[c]) out.partition_defect = std::max(out.partition_defect, std::fabs(1.0 - covered[c]));
  }
  if (m_q > 0) {
    out.g_ratio = out.g.sup_abs() / m_q;
    for (const auto& bp : out.bad) out.c_ratio = std::max(out.c_ratio, std::fabs(bp.c) / m_q);
  }
  return out;
}

namespace {

// T applied to f psi_I, I given by center and length in grid coordinates.
class Localizer {
 public:
  Localizer(const LineFunction& f, const CZKernelSpec& t)
      : f_(f), w_(kernel_weights(t, f.grid)), buf_(f.size(), 0.0) {}

  // T(f psi_{2R}) for R = cells [lo, lo + len), at cells [out_lo, out_hi)
  std::vector<double> apply(std::size_t lo, std::size_t len, std::size_t out_lo, std::size_t out_hi) {
    const auto& prof = profile(len);
    const auto n = static_cast<std::ptrdiff_t>(f_.size());
    const std::ptrdiff_t first = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(lo) + prof.first);
    const std::ptrdiff_t last =
        std::min(n, static_cast<std::ptrdiff_t>(lo) + prof.first + static_cast<std::ptrdiff_t>(prof.second.size()));
    if (first >= last) return std::vector<double>(out_hi - out_lo, 0.0);
    for (std::ptrdiff_t c = first; c < last; ++c)
      buf_[c] = f_[c] * prof.second[c - static_cast<std::ptrdiff_t>(lo) - prof.first];
    auto out = apply_kernel(w_, buf_, first, last, out_lo, out_hi);
    std::fill(buf_.begin() + first, buf_.begin() + last, 0.0);
    return out;
  }
  std::vector<double> plain(std::size_t in_lo, std::size_t in_hi, std::size_t out_lo, std::size_t out_hi) const {
    return apply_kernel(w_, f_.values, in_lo, in_hi, out_lo, out_hi);
  }

  // (f_Q, M^#_Q f) on the cells of Q = [lo, hi)
  std::pair<std::vector<double>, std::vector<double>> sharp(std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    if (!is_pow2(n)) throw std::invalid_argument("Q must span a power of two cells");
    auto fq = apply(lo, n, lo, hi);
    std::vector<double> ms(n, 0.0);
    for (std::size_t len = n / 2; len >= 1; len /= 2) {
      for (std::size_t r = lo; r < hi; r += len) {
        auto fr = apply(r, len, r, r + len);
        double mx = -std::numeric_limits<double>::infinity(), mn = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < len; ++c) {
          const double v = fq[r - lo + c] - fr[c];
          mx = std::max(mx, v);
          mn = std::min(mn, v);
        }
        for (std::size_t c = 0; c < len; ++c) ms[r - lo + c] = std::max(ms[r - lo + c], mx - mn);
      }
      if (len == 1) break;
    }
    return {std::move(fq), std::move(ms)};
  }

 private:
  // Cell averages of psi_{2R} relative to the first cell of R, R of len cells.
  const std::pair<std::ptrdiff_t, std::vector<double>>& profile(std::size_t len) {
    auto it = profiles_.find(len);
    if (it != profiles_.end()) return it->second;
    const double l = static_cast<double>(len);
    LineGrid unit(-2.0 * l, 3.0 * l, 5 * len);
    auto p = cutoff_cell_averages(unit, 0.5 * l, 2.0 * l);
    return profiles_.emplace(len, std::pair{static_cast<std::ptrdiff_t>(p.lo) - 2 * static_cast<std::ptrdiff_t>(len),
                                            std::move(p.values)})
        .first->second;
  }

  const LineFunction& f_;
  std::vector<double> w_;
  std::vector<double> buf_;
  std::map<std::size_t, std::pair<std::ptrdiff_t, std::vector<double>>> profiles_;
};

double pct(std::vector<double> v, Ratio r) { return percentile_uniform(v, r); }

}  // namespace

std::vector<double> grand_sharp_maximal(const LineFunction& f, double q0, double q1, const CZKernelSpec& t) {
  auto [lo, hi] = f.grid.cells(q0, q1);
  Localizer loc(f, t);
  return loc.sharp(lo, hi).second;
}

CZOResult czo_extract_sparse(const LineFunction& f, const CZKernelSpec& t, const SmoothBumpDictionary& d, double q0,
                             double q1, int max_depth) {
  auto [lo0, hi0] = f.grid.cells(q0, q1);
  const std::size_t n0 = hi0 - lo0;
  if (!is_pow2(n0)) throw std::invalid_argument("Q0 must span a power of two cells");
  for (std::size_t c = 0; c < f.size(); ++c)
    if ((c < lo0 || c >= hi0) && f[c] != 0.0) throw std::invalid_argument("f must be supported in Q0");
  if (!std::isfinite(check_kernel(t).measured_ck)) throw std::invalid_argument("kernel is not integrable");
  const int depth0 = log2_exact(n0);
  max_depth = std::min(max_depth, depth0);
  const double len0 = q1 - q0;
  f.grid.cells(q0 - len0, q1 + len0);  // 3Q0 must fit

  CZOResult res{SparseFamily::adapted(build_grid(depth0)), {}, {}, {}, {}, {}, Ratio{1, 32}, d.size()};
  const Ratio r = res.r, r2 = res.r.times(2);
  Localizer loc(f, t);
  std::vector<double> tf = loc.plain(lo0, hi0, lo0, hi0);
  std::vector<double> lhs(n0), rhs(n0, 0.0);
  for (std::size_t c = 0; c < n0; ++c) lhs[c] = std::fabs(tf[c]);

  if (f.sup_abs() == 0.0) {
    res.domination = check_domination(lhs, rhs, std::nullopt, "|Tf| <= C sum P^r(M^s_3Q f) 1_Q");
    res.sparsity = verify_sparsity(res.family, Ratio{1, 2});
    res.eston.inequality = "P^2r(|T f1_3Q|) <= C (1/r) P^r(M^s_3Q f)";
    res.sharp.inequality = "M#_Q f <= C M^s_3Q f";
    return res;
  }

  SmoothMaximal table(f, d);
  std::vector<double> eston_l, eston_r, sharp_l, sharp_r;
  std::deque<Cube> queue{Cube{0, 0}};
  while (!queue.empty()) {
    const Cube q = queue.front();
    queue.pop_front();
    res.family.add(q);
    const std::size_t len = n0 >> q.level;
    const std::size_t qlo = lo0 + static_cast<std::size_t>(q.index) * len, qhi = qlo + len;
    auto ms3 = table.local(qlo - len, qhi + len);
    std::vector<double> ms(ms3.begin() + static_cast<std::ptrdiff_t>(len),
                           ms3.begin() + static_cast<std::ptrdiff_t>(2 * len));
    CZONode node{q};
    node.rhs = pct(ms, r);
    auto [fq, msharp] = loc.sharp(qlo, qhi);
    std::vector<double> afq(len);
    for (std::size_t c = 0; c < len; ++c) afq[c] = std::fabs(fq[c]);
    node.fq_level = pct(afq, r2);
    node.sharp_level = pct(msharp, r2);

    auto tloc = loc.plain(qlo - len, qhi + len, qlo, qhi);
    for (auto& v : tloc) v = std::fabs(v);
    eston_l.push_back(pct(tloc, r2));
    eston_r.push_back(node.rhs / r.value());
    node.eston_ratio = ratio_or_inf(eston_l.back(), eston_r.back());
    for (std::size_t c = 0; c < len; ++c) {
      sharp_l.push_back(msharp[c]);
      sharp_r.push_back(ms[c]);
      node.sharp_ratio = std::max(node.sharp_ratio, ratio_or_inf(msharp[c], ms[c]));
      rhs[qlo - lo0 + c] += node.rhs;
    }

    // children: maximal dyadic P strictly inside Q with |P cap E| > |P| / 4
    std::vector<char> e(len);
    for (std::size_t c = 0; c < len; ++c) e[c] = afq[c] > node.fq_level || msharp[c] > node.sharp_level;
    std::vector<char> taken(len, 0);
    double child_mass = 0.0;
    for (int k = q.level + 1; k <= max_depth; ++k) {
      const std::size_t plen = n0 >> k;
      for (std::size_t s = 0; s < len; s += plen) {
        if (taken[s]) continue;
        std::size_t cnt = 0;
        for (std::size_t c = s; c < s + plen; ++c) cnt += e[c];
        if (4 * cnt <= plen) continue;
        std::fill(taken.begin() + static_cast<std::ptrdiff_t>(s), taken.begin() + static_cast<std::ptrdiff_t>(s + plen), 1);
        child_mass += static_cast<double>(plen);
        queue.push_back(Cube{k, static_cast<std::int64_t>((qlo - lo0 + s) / plen)});
      }
    }
    node.child_fraction = child_mass / static_cast<double>(len);
    res.nodes.push_back(node);
  }
  res.family.normalize();
  res.domination = check_domination(lhs, rhs, std::nullopt, "|Tf| <= C sum P^r(M^s_3Q f) 1_Q");
  res.domination.measured["r"] = r.value();
  res.domination.measured["dictionary_size"] = static_cast<double>(d.size());
  res.domination.pass = std::isfinite(res.domination.best_constant);
  res.sparsity = verify_sparsity(res.family, Ratio{1, 2});
  res.eston = check_domination(eston_l, eston_r, std::nullopt, "P^2r(|T f1_3Q|) <= C (1/r) P^r(M^s_3Q f)");
  res.eston.pass = std::isfinite(res.eston.best_constant);
  res.sharp = check_domination(sharp_l, sharp_r, std::nullopt, "M#_Q f <= C M^s_3Q f");
  res.sharp.pass = std::isfinite(res.sharp.best_constant);
  return res;
}

QGridAudit qgrid_audit(const LineFunction& f, const CZKernelSpec& t, const SmoothBumpDictionary& d, double q0,
                       double q1, int depth) {
  auto [lo0, hi0] = f.grid.cells(q0, q1);
  const std::size_t n0 = hi0 - lo0;
  if (!is_pow2(n0)) throw std::invalid_argument("Q0 must span a power of two cells");
  const double len0 = q1 - q0;
  f.grid.cells(q0 - len0, q1 + len0);
  depth = std::min(depth, log2_exact(n0));
  const Ratio r{1, 32}, r2{1, 16};
  Localizer loc(f, t);
  SmoothMaximal table(f, d);
  QGridAudit out;
  for (int k = 0; k <= depth; ++k) {
    const std::size_t len = n0 >> k;
    for (std::int64_t i = 0; i < (std::int64_t{1} << k); ++i) {
      const std::size_t qlo = lo0 + static_cast<std::size_t>(i) * len, qhi = qlo + len;
      auto ms3 = table.local(qlo - len, qhi + len);
      std::vector<double> ms(ms3.begin() + static_cast<std::ptrdiff_t>(len),
                             ms3.begin() + static_cast<std::ptrdiff_t>(2 * len));
      const double rhs = pct(ms, r) / r.value();
      auto tloc = loc.plain(qlo - len, qhi + len, qlo, qhi);
      for (auto& v : tloc) v = std::fabs(v);
      const double e = ratio_or_inf(pct(tloc, r2), rhs);
      if (e > out.eston) {
        out.eston = e;
        out.eston_witness = Cube{k, i};
      }
      auto msharp = loc.sharp(qlo, qhi).second;
      for (std::size_t c = 0; c < len; ++c) {
        const double v = ratio_or_inf(msharp[c], ms[c]);
        if (v > out.sharp) {
          out.sharp = v;
          out.sharp_witness = Cube{k, i};
        }
      }
      ++out.cubes;
    }
  }
  return out;
}

namespace {

// H f for the alternating indicator; logx is log x, passed separately near 0.
double hilbert_alternating(int m, double x, double logx) {
  double s = 0.0, binom = 1.0;
  for (int k = 0; k <= m + 1; ++k) {
    const double c = (k % 2 == 0 ? 1.0 : -1.0) * binom;
    const double a = k == 0 ? logx : std::log(std::fabs(x - k));
    s += c * (a - std::log(std::fabs(x - k - 1)));
    binom = binom * (m + 1 - k) / (k + 1);
  }
  return s;
}

double hilbert_norm_p(int m, double p, double eps) {
  auto hf = [&](double x) { return std::pow(std::fabs(hilbert_alternating(m, x, std::log(std::fabs(x)))), p); };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  double total = 0.0;
  // (0,1) with u = x^eps, w dx = du
  total += ts.integrate(
      [&](double u) {
        const double logx = std::log(u) / eps;
        return std::pow(std::fabs(hilbert_alternating(m, std::exp(logx), logx)), p);
      },
      0.0, 1.0);
  total += ts.integrate(hf, -1.0, 0.0);
  for (int k = 1; k <= m + 2; ++k) total += ts.integrate(hf, static_cast<double>(k), k + 1.0);
  const double right = m + 3.0;
  total += es.integrate([&](double t) { return hf(right + t); }, 0.0, std::numeric_limits<double>::infinity());
  total += es.integrate([&](double t) { return hf(-1.0 - t); }, 0.0, std::numeric_limits<double>::infinity());
  return std::pow(total, 1.0 / p);
}

}  // namespace

HilbertSharpnessReport hilbert_sharpness_experiment(double p, double s, double q, const std::vector<double>& eps_list,
                                                    std::size_t dict_size, std::size_t cells, double half_width) {
  if (!(s > 0) || !(p > 0) || !(s > 1.0 / p - 1.0)) throw std::invalid_argument("requires s > 0 and s > 1/p - 1");
  if (!(q > 1)) throw std::invalid_argument("requires q > 1");
  HilbertSharpnessReport rep;
  rep.s = s;
  rep.p = p;
  rep.q = q;
  rep.m = split_smoothness(s).first;
  LineGrid g(-half_width, half_width, cells);
  auto f = alternating_indicator(g, rep.m);
  for (int k = 0; k <= rep.m; ++k) {
    double mom = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      const double a = g.left(c), b = a + g.h();
      mom += f[c] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
    }
    rep.moment_error = std::max(rep.moment_error, std::fabs(mom));
  }
  SmoothBumpDictionary dict(s, dict_size);
  auto ms = smooth_maximal(f, dict);
  std::vector<double> aq, ratio;
  for (double eps : eps_list) {
    HilbertSharpnessPoint pt;
    pt.eps = eps;
    pt.aq = aq_characteristic(Weight::power(eps), q, CubeFamily::dyadic, 12).value;
    pt.h_norm = hilbert_norm_p(rep.m, p, eps);
    double acc = 0.0;
    for (std::size_t c = 0; c < ms.size(); ++c) {
      const double a = g.left(c), b = a + g.h();
      const double wm = (a >= 0.0 && b <= 1.0) ? std::pow(b, eps) - std::pow(a, eps) : g.h();
      acc += std::pow(ms[c], p) * wm;
    }
    pt.ms_norm = std::pow(acc, 1.0 / p);
    pt.ratio = pt.h_norm / pt.ms_norm;
    aq.push_back(pt.aq);
    ratio.push_back(pt.ratio);
    rep.points.push_back(pt);
  }
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (const auto& pt : rep.points) {
    mx = std::max(mx, pt.ms_norm);
    mn = std::min(mn, pt.ms_norm);
  }
  rep.ms_spread = rep.points.empty() ? 0.0 : mx / mn;
  if (rep.points.size() >= 2) rep.slope = loglog_slope(aq, ratio);
  return rep;
}

}  // namespace sparsedom
