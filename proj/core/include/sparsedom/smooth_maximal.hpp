#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sparsedom/line.hpp"

namespace sparsedom {

// Finite stand-in for F_s(Q): bump(z) = exp(1 - 1/(1 - z^2)) on the unit interval (z = 2u - 1)
// times Legendre P_0..P_5, then cos / sin modulations. Every member is scaled by
// 1 / (2 max_{j <= m+1} sup |d^j/du^j|), which gives the F_s bounds at any interval length.
// Sizes are prefixes of one master list, so a larger dictionary never lowers M^s.
class SmoothBumpDictionary {
 public:
  static constexpr std::size_t kMaxSize = 32;

  SmoothBumpDictionary(double s, std::size_t size);

  double s() const { return s_; }
  int m() const { return m_; }
  double delta() const { return delta_; }
  std::size_t size() const { return size_; }
  bool hardy_littlewood() const { return s_ == 0.0; }
  double norm(std::size_t k) const { return norm_[k]; }

  // Normalized member k at u in (0, 1).
  double value(std::size_t k, double u) const;
  // d^j/du^j of member k, j <= 4.
  double derivative(std::size_t k, double u, int j) const;

  // W[k][c] = int over cell c of the n-cell interval of member k, in unit coordinates,
  // so that |Q|^{-1} int f phi = sum_c f_c W[k][c].
  const std::vector<std::vector<double>>& cell_weights(std::size_t n) const;

 private:
  double s_;
  int m_;
  double delta_;
  std::size_t size_;
  std::vector<double> norm_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

struct DictionaryCheck {
  bool pass = true;
  double worst = 0.0;  // largest (observed / allowed) over all checks
  std::size_t samples = 0;
};
// F_s(Q) derivative and Holder bounds on a verification mesh of the unit interval.
DictionaryCheck validate_dictionary(const SmoothBumpDictionary& d, std::size_t mesh = 4097);

// All grid intervals of 2^j cells with start stride max(1, 2^j / 8) and their best dictionary value.
class SmoothMaximal {
 public:
  struct Entry {
    std::uint32_t lo = 0;
    std::uint32_t len = 0;
    double value = 0.0;
  };

  SmoothMaximal(const LineFunction& f, const SmoothBumpDictionary& d);

  const LineGrid& grid() const { return grid_; }
  const std::vector<Entry>& entries() const { return entries_; }
  LineFunction global() const;
  // Localized to intervals inside cells [lo, hi); values on those cells.
  std::vector<double> local(std::size_t lo, std::size_t hi) const;

 private:
  LineGrid grid_;
  std::vector<Entry> entries_;
};

// M^s f, or M^s_{Q0} f when localized to Q0 = [x0, x1) (zero outside Q0).
LineFunction smooth_maximal(const LineFunction& f, const SmoothBumpDictionary& d,
                            std::optional<std::pair<double, double>> localize = std::nullopt);

// f = sum_{k=0}^{m+1} (-1)^k C(m+1, k) 1_{(k, k+1)}.
LineFunction alternating_indicator(const LineGrid& g, int m);

}  // namespace sparsedom
