#include "sparsedom/line.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/differentiation/autodiff.hpp>

namespace sparsedom {

namespace ad = boost::math::differentiation;

LineGrid::LineGrid(double a_, double b_, std::size_t m_) : a(a_), b(b_), m(m_) {
  if (m < 2) throw std::invalid_argument("line grid needs at least two cells");
  if (!(b > a)) throw std::invalid_argument("line grid needs a < b");
}

std::size_t LineGrid::cell_of(double x) const {
  if (x < a || x >= b) throw std::out_of_range("point outside the line grid");
  auto i = static_cast<std::size_t>(std::floor((x - a) / h()));
  return std::min(i, m - 1);
}

std::pair<std::size_t, std::size_t> LineGrid::cells(double x0, double x1) const {
  const double lo = (x0 - a) / h(), hi = (x1 - a) / h();
  const double rlo = std::round(lo), rhi = std::round(hi);
  if (std::fabs(lo - rlo) > 1e-9 || std::fabs(hi - rhi) > 1e-9)
    throw std::invalid_argument("interval ends are not cell boundaries");
  if (rlo < 0 || rhi > static_cast<double>(m) || rhi < rlo) throw std::out_of_range("interval outside the grid");
  return {static_cast<std::size_t>(rlo), static_cast<std::size_t>(rhi)};
}

LineFunction::LineFunction(const LineGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.m) throw std::invalid_argument("line function size mismatch");
}

double LineFunction::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.h();
}

double LineFunction::sup_abs() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::fabs(v));
  return s;
}

void LineFunction::add_indicator(double x0, double x1, double c) {
  auto [lo, hi] = grid.cells(x0, x1);
  for (std::size_t i = lo; i < hi; ++i) values[i] += c;
}

LineFunction LineFunction::refined() const {
  LineFunction out(grid.refined());
  for (std::size_t i = 0; i < size(); ++i) out.values[2 * i] = out.values[2 * i + 1] = values[i];
  return out;
}

std::pair<int, double> split_smoothness(double s) {
  if (s < 0) throw std::invalid_argument("smoothness must be nonnegative");
  if (s == 0) return {0, 0.0};
  int m = static_cast<int>(std::ceil(s)) - 1;
  return {m, s - m};
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <class T>
T kernel_expr(const CZKernelSpec& k, const T& u) {
  if (k.kind == KernelKind::hilbert) return 1.0 / u;
  return u / (u * u + k.smooth * k.smooth);
}

constexpr int kMaxOrder = 4;

std::vector<double> derivatives(const CZKernelSpec& k, double u) {
  auto x = ad::make_fvar<double, kMaxOrder>(u);
  auto y = kernel_expr(k, x);
  std::vector<double> d(kMaxOrder + 1);
  for (int j = 0; j <= kMaxOrder; ++j) d[j] = y.derivative(j);
  return d;
}

}  // namespace

CZKernelSpec CZKernelSpec::hilbert(double s) {
  CZKernelSpec k;
  k.kind = KernelKind::hilbert;
  k.s = s;
  auto [m, delta] = split_smoothness(s);
  double c = 1.0;
  for (int a = 0; a <= m; ++a)
    c = std::max({c, factorial(a), factorial(a) * (a + 1) * std::pow(2.0, a + 1 + delta)});
  k.ck = c;
  return k;
}

CZKernelSpec CZKernelSpec::smoothed_power(double s, double smooth) {
  if (!(smooth > 0)) throw std::invalid_argument("smoothing length must be positive");
  CZKernelSpec k;
  k.kind = KernelKind::smoothed_power;
  k.s = s;
  k.smooth = smooth;
  k.ck = std::numeric_limits<double>::infinity();
  k.ck = 1.25 * check_kernel(k).measured_ck;
  return k;
}

double CZKernelSpec::kernel(double u) const { return kernel_expr(*this, u); }

double CZKernelSpec::primitive(double u) const {
  if (kind == KernelKind::hilbert) return u == 0.0 ? 0.0 : std::log(std::fabs(u));
  return 0.5 * std::log(u * u + smooth * smooth);
}

std::string CZKernelSpec::name() const { return kind == KernelKind::hilbert ? "hilbert" : "smoothed-power"; }

KernelCheck check_kernel(const CZKernelSpec& k) {
  auto [m, delta] = split_smoothness(k.s);
  if (m + 1 > kMaxOrder) throw std::invalid_argument("kernel smoothness too large");
  KernelCheck out;
  for (int e = -30; e <= 30; ++e) {
    for (double sign : {-1.0, 1.0}) {
      const double u = sign * std::pow(2.0, e / 3.0);
      const auto du = derivatives(k, u);
      for (int a = 0; a <= m; ++a) {
        out.measured_ck = std::max(out.measured_ck, std::fabs(du[a]) * std::pow(std::fabs(u), 1 + a));
        ++out.samples;
        for (double frac : {0.5, -0.5, 0.125, -0.125, 1.0 / 64}) {
          const double h = frac * std::fabs(u);
          const auto dv = derivatives(k, u + h);
          const double bound = std::pow(std::fabs(h), delta) / std::pow(std::fabs(u), 1 + a + delta);
          out.measured_ck = std::max(out.measured_ck, std::fabs(du[a] - dv[a]) / bound);
          ++out.samples;
        }
      }
    }
  }
  out.pass = out.measured_ck <= k.ck * (1 + 1e-9);
  return out;
}

std::vector<double> kernel_weights(const CZKernelSpec& k, const LineGrid& g) {
  const double h = g.h();
  const std::size_t n = g.m;
  std::vector<double> w(2 * n - 1);
  for (std::size_t t = 0; t < w.size(); ++t) {
    const double d = static_cast<double>(t) - static_cast<double>(n - 1);
    // cell j = [mid_i - (d + 1/2) h, mid_i - (d - 1/2) h]
    w[t] = d == 0.0 ? 0.0 : k.primitive((d + 0.5) * h) - k.primitive((d - 0.5) * h);
  }
  return w;
}

std::vector<double> apply_kernel(const std::vector<double>& weights, const std::vector<double>& f, std::size_t in_lo,
                                 std::size_t in_hi, std::size_t out_lo, std::size_t out_hi) {
  const std::size_t n = (weights.size() + 1) / 2;
  std::vector<double> out(out_hi - out_lo, 0.0);
  for (std::size_t i = out_lo; i < out_hi; ++i) {
    const double* w = weights.data() + (n - 1) + i;  // w[-j] gives d = i - j
    double s = 0.0;
    for (std::size_t j = in_lo; j < in_hi; ++j) s += f[j] * *(w - j);
    out[i - out_lo] = s;
  }
  return out;
}

LineFunction apply_kernel(const CZKernelSpec& k, const LineFunction& f) {
  auto w = kernel_weights(k, f.grid);
  return LineFunction(f.grid, apply_kernel(w, f.values, 0, f.size(), 0, f.size()));
}

LineFunction hilbert_transform(const LineFunction& f) { return apply_kernel(CZKernelSpec::hilbert(), f); }

double hilbert_indicator(double x0, double x1, double x) {
  return std::log(std::fabs(x - x0)) - std::log(std::fabs(x - x1));
}

double pairing(const LineFunction& f, const LineFunction& g) {
  if (f.size() != g.size()) throw std::invalid_argument("pairing size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid.h();
}

}  // namespace sparsedom
