#include "sparsedom/smooth_maximal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace sparsedom {

namespace ad = boost::math::differentiation;

namespace {

constexpr int kOrder = 4;
constexpr std::size_t kLegendre = 6;

// Unnormalized member k at u, generic over autodiff types.
template <class T>
T raw_member(std::size_t k, const T& u) {
  using std::cos;
  using std::exp;
  using std::sin;
  const T z = 2.0 * u - 1.0;
  const T bump = exp(1.0 - 1.0 / (1.0 - z * z));
  if (k < kLegendre) {
    T p0 = 0.0 * z + 1.0, p1 = z;
    if (k == 0) return bump * p0;
    for (std::size_t n = 1; n < k; ++n) {
      T p2 = ((2.0 * n + 1.0) * z * p1 - static_cast<double>(n) * p0) / (n + 1.0);
      p0 = p1;
      p1 = p2;
    }
    return bump * p1;
  }
  const std::size_t t = k - kLegendre;
  const double freq = boost::math::constants::pi<double>() * static_cast<double>(t / 2 + 1);
  return t % 2 == 0 ? bump * cos(freq * z) : bump * sin(freq * z);
}

std::vector<double> raw_derivatives(std::size_t k, double u) {
  auto x = ad::make_fvar<double, kOrder>(u);
  auto y = raw_member(k, x);
  std::vector<double> d(kOrder + 1);
  for (int j = 0; j <= kOrder; ++j) d[j] = y.derivative(j);
  return d;
}

}  // namespace

struct SmoothBumpDictionary::Cache {
  std::mutex mu;
  std::map<std::size_t, std::vector<std::vector<double>>> weights;
};

SmoothBumpDictionary::SmoothBumpDictionary(double s, std::size_t size)
    : s_(s), size_(size), cache_(std::make_shared<Cache>()) {
  if (size == 0 || size > kMaxSize) throw std::invalid_argument("dictionary size must be in [1, 32]");
  std::tie(m_, delta_) = split_smoothness(s);
  if (m_ + 1 > kOrder) throw std::invalid_argument("smoothness above 3 is not supported");
  norm_.assign(size_, 1.0);
  if (hardy_littlewood()) return;
  const int top = m_ + 1;
  const std::size_t mesh = 4000;
  for (std::size_t k = 0; k < size_; ++k) {
    double sup = 0.0;
    for (std::size_t i = 1; i < mesh; ++i) {
      auto d = raw_derivatives(k, static_cast<double>(i) / mesh);
      for (int j = 0; j <= top; ++j) sup = std::max(sup, std::fabs(d[j]));
    }
    norm_[k] = 1.0 / (2.0 * sup);
  }
}

double SmoothBumpDictionary::value(std::size_t k, double u) const {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return norm_[k] * raw_member(k, u);
}

double SmoothBumpDictionary::derivative(std::size_t k, double u, int j) const {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return norm_[k] * raw_derivatives(k, u)[j];
}

const std::vector<std::vector<double>>& SmoothBumpDictionary::cell_weights(std::size_t n) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->weights.find(n);
  if (it != cache_->weights.end()) return it->second;
  std::vector<std::vector<double>> w(size_, std::vector<double>(n));
  using boost::math::quadrature::gauss;
  // fixed rule on at least 64 pieces of the unit interval
  const std::size_t pieces = std::max<std::size_t>(1, 64 / n);
  const double step = 1.0 / static_cast<double>(n * pieces);
  for (std::size_t k = 0; k < size_; ++k) {
    auto fk = [&](double u) { return value(k, u); };
    for (std::size_t c = 0; c < n; ++c) {
      double acc = 0.0;
      for (std::size_t p = 0; p < pieces; ++p) {
        const double a = static_cast<double>(c * pieces + p) * step;
        acc += gauss<double, 20>::integrate(fk, a, a + step);
      }
      w[k][c] = acc;
    }
  }
  return cache_->weights.emplace(n, std::move(w)).first->second;
}

DictionaryCheck validate_dictionary(const SmoothBumpDictionary& d, std::size_t mesh) {
  DictionaryCheck out;
  if (d.hardy_littlewood()) {
    out.worst = 1.0;
    return out;
  }
  const int m = d.m();
  for (std::size_t k = 0; k < d.size(); ++k) {
    std::vector<double> top(mesh + 1);
    for (std::size_t i = 0; i <= mesh; ++i) {
      const double u = static_cast<double>(i) / mesh;
      for (int j = 0; j <= m; ++j) {
        const double v = std::fabs(d.derivative(k, u, j));
        out.worst = std::max(out.worst, v);
        ++out.samples;
      }
      top[i] = d.derivative(k, u, m);
    }
    // Holder pairs at dyadic separations; the mesh ends sit on the support boundary
    for (std::size_t gap = 1; gap <= mesh; gap *= 2) {
      const double dist = static_cast<double>(gap) / mesh;
      const double allowed = std::pow(dist, d.delta());
      for (std::size_t i = 0; i + gap <= mesh; ++i) {
        out.worst = std::max(out.worst, std::fabs(top[i] - top[i + gap]) / allowed);
        ++out.samples;
      }
    }
  }
  out.pass = out.worst <= 1.0;
  return out;
}

SmoothMaximal::SmoothMaximal(const LineFunction& f, const SmoothBumpDictionary& d) : grid_(f.grid) {
  const std::size_t total = f.size();
  std::vector<double> prefix(total + 1, 0.0);
  for (std::size_t i = 0; i < total; ++i) prefix[i + 1] = prefix[i] + std::fabs(f[i]);
  for (std::size_t n = 1; n <= total; n *= 2) {
    const std::size_t stride = std::max<std::size_t>(1, n / 8);
    const auto* w = d.hardy_littlewood() ? nullptr : &d.cell_weights(n);
    for (std::size_t lo = 0; lo + n <= total; lo += stride) {
      double best = 0.0;
      if (!w) {
        best = (prefix[lo + n] - prefix[lo]) / static_cast<double>(n);
      } else {
        for (const auto& wk : *w) {
          double acc = 0.0;
          for (std::size_t c = 0; c < n; ++c) acc += f[lo + c] * wk[c];
          best = std::max(best, std::fabs(acc));
        }
      }
      entries_.push_back({static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(n), best});
    }
  }
}

LineFunction SmoothMaximal::global() const { return LineFunction(grid_, local(0, grid_.m)); }

std::vector<double> SmoothMaximal::local(std::size_t lo, std::size_t hi) const {
  std::vector<double> out(hi - lo, 0.0);
  for (const auto& e : entries_) {
    if (e.lo < lo || e.lo + e.len > hi || e.value == 0.0) continue;
    for (std::size_t c = e.lo; c < e.lo + e.len; ++c) out[c - lo] = std::max(out[c - lo], e.value);
  }
  return out;
}

LineFunction smooth_maximal(const LineFunction& f, const SmoothBumpDictionary& d,
                            std::optional<std::pair<double, double>> localize) {
  SmoothMaximal table(f, d);
  if (!localize) return table.global();
  auto [lo, hi] = f.grid.cells(localize->first, localize->second);
  LineFunction out(f.grid);
  auto v = table.local(lo, hi);
  std::copy(v.begin(), v.end(), out.values.begin() + static_cast<std::ptrdiff_t>(lo));
  return out;
}

LineFunction alternating_indicator(const LineGrid& g, int m) {
  LineFunction f(g);
  double binom = 1.0;
  for (int k = 0; k <= m + 1; ++k) {
    f.add_indicator(k, k + 1, (k % 2 == 0 ? 1.0 : -1.0) * binom);
    binom = binom * (m + 1 - k) / (k + 1);
  }
  return f;
}

}  // namespace sparsedom
