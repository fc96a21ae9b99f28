#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sparsedom {

// Uniform cells of width h on [a, b).
struct LineGrid {
  double a = 0.0;
  double b = 1.0;
  std::size_t m = 2;

  LineGrid() = default;
  LineGrid(double a, double b, std::size_t m);
  double h() const { return (b - a) / static_cast<double>(m); }
  double left(std::size_t i) const { return a + h() * static_cast<double>(i); }
  double mid(std::size_t i) const { return a + h() * (static_cast<double>(i) + 0.5); }
  // Cell index of x; x must lie in [a, b).
  std::size_t cell_of(double x) const;
  // Cell range [lo, hi) covering [x0, x1); both ends must be cell boundaries.
  std::pair<std::size_t, std::size_t> cells(double x0, double x1) const;
  LineGrid refined() const { return LineGrid(a, b, 2 * m); }
};

// Piecewise constant function, one value per cell.
struct LineFunction {
  LineGrid grid;
  std::vector<double> values;

  LineFunction() = default;
  explicit LineFunction(const LineGrid& g) : grid(g), values(g.m, 0.0) {}
  LineFunction(const LineGrid& g, std::vector<double> v);
  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double integral() const;
  double sup_abs() const;
  // Sum of c 1_{(x0,x1)}; the ends are cell boundaries.
  void add_indicator(double x0, double x1, double c);
  // Same function on the grid with twice as many cells.
  LineFunction refined() const;
};

// Convolution kernels K(x, y) = k(x - y).
enum class KernelKind { hilbert, smoothed_power };

struct CZKernelSpec {
  KernelKind kind = KernelKind::hilbert;
  double s = 1.0;       // smoothness m + delta
  double ck = 4.0;      // declared constant
  double smooth = 0.0;  // smoothed_power: k(u) = u / (u^2 + smooth^2)

  static CZKernelSpec hilbert(double s = 1.0);
  static CZKernelSpec smoothed_power(double s, double smooth);

  double kernel(double u) const;
  // P with int_{y0}^{y1} k(x - y) dy = P(x - y0) - P(x - y1).
  double primitive(double u) const;
  std::string name() const;
};

struct KernelCheck {
  bool pass = true;
  double measured_ck = 0.0;
  std::size_t samples = 0;
};
// Size, derivative and Holder bounds of the CZ definition on a log-spaced mesh, |h| <= |u|/2.
KernelCheck check_kernel(const CZKernelSpec& k);

// Split smoothness into m + delta with delta in (0, 1]; s = 0 gives (0, 0).
std::pair<int, double> split_smoothness(double s);

// Toeplitz weights w[d + (m-1)] = int over cell j of k(mid_i - y) dy for d = i - j.
std::vector<double> kernel_weights(const CZKernelSpec& k, const LineGrid& g);

// Tf at the midpoints of cells [out_lo, out_hi), from the values of f on [in_lo, in_hi).
std::vector<double> apply_kernel(const std::vector<double>& weights, const std::vector<double>& f,
                                 std::size_t in_lo, std::size_t in_hi, std::size_t out_lo, std::size_t out_hi);
LineFunction apply_kernel(const CZKernelSpec& k, const LineFunction& f);
LineFunction hilbert_transform(const LineFunction& f);
// H 1_{(x0,x1)}(x) = log|x - x0| - log|x - x1|.
double hilbert_indicator(double x0, double x1, double x);

// h * sum f g
double pairing(const LineFunction& f, const LineFunction& g);

}  // namespace sparsedom
