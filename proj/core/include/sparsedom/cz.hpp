#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/line.hpp"
#include "sparsedom/smooth_maximal.hpp"
#include "sparsedom/sparse_family.hpp"

namespace sparsedom {

// Smooth cutoff: 1 on [-1/2, 1/2], 0 outside (-9/16, 9/16), exp-type transition.
double cutoff_psi(double x);
// Cell averages of psi((x - center) / length); zero outside the returned range [lo, lo + size).
struct CellProfile {
  std::size_t lo = 0;
  std::vector<double> values;
};
CellProfile cutoff_cell_averages(const LineGrid& g, double center, double length);

// Whitney interval in cell units (cell i is [i, i+1)).
struct WhitneyInterval {
  double lo = 0.0;
  double hi = 0.0;
  double dist = 0.0;  // distance to the complement of Omega
  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};
// Maximal dyadic intervals R meeting {2 l(R) < dist(., R \ Omega) <= 4 l(R)}, down to 2^min_level cells.
std::vector<WhitneyInterval> whitney_decomposition(const std::vector<char>& omega, int min_level = -20);
// Largest number of (9/8)R covering one point.
std::size_t whitney_overlap(const std::vector<WhitneyInterval>& w);

struct BadPart {
  WhitneyInterval r;
  double c = 0.0;
  std::size_t cell_lo = 0;
  std::vector<double> b;    // cell averages of (f - c) eta on cells [cell_lo, cell_lo + size)
  std::vector<double> eta;  // cell averages of eta on the same cells
  double integral = 0.0;    // int b (physical units)
};

struct CZDecomposition {
  LineFunction g;
  std::vector<BadPart> bad;
  std::vector<char> omega;  // per cell of the grid
  double threshold = 0.0;
  double reconstruction_error = 0.0;
  double max_bad_integral = 0.0;
  double g_ratio = 0.0;  // ||g||_inf / m_Q
  double c_ratio = 0.0;  // max |c_j| / m_Q
  double partition_defect = 0.0;
  std::size_t overlap = 0;
  bool whitney_ok = true;
};
// Q = [q0, q1) with 3Q inside the grid; Omega = {M^s_{3Q} f > m_Q}.
CZDecomposition smooth_cz_decomposition(const LineFunction& f, const SmoothBumpDictionary& d, double q0, double q1,
                                        double m_q);

// M^#_Q f on the cells of Q = [q0, q1), for f_Q = T(f psi_{2Q}); Q must span 2^k cells.
std::vector<double> grand_sharp_maximal(const LineFunction& f, double q0, double q1, const CZKernelSpec& t);

struct CZONode {
  Cube cube;                // relative to Q0
  double rhs = 0.0;         // P^r_Q(M^s_{3Q} f)
  double fq_level = 0.0;    // P^{2r}_Q(|f_Q|)
  double sharp_level = 0.0; // P^{2r}_Q(M^#_Q f)
  double child_fraction = 0.0;
  double eston_ratio = 0.0; // P^{2r}_Q(|T(f 1_{3Q})|) / ((1/r) P^r_Q(M^s_{3Q} f))
  double sharp_ratio = 0.0; // sup_Q M^#_Q f / M^s_{3Q} f
};

struct CZOResult {
  SparseFamily family;
  DominationReport domination;  // |Tf| <= C sum_S P^r_Q(M^s_{3Q} f) 1_Q
  DominationReport sparsity;
  DominationReport eston;       // per-node ratio
  DominationReport sharp;       // M^#_Q f <= C M^s_{3Q} f
  std::vector<CZONode> nodes;
  Ratio r{1, 32};
  std::size_t dictionary_size = 0;
};
// f supported in Q0 = [q0, q1) (2^k cells); recursion stops at |Q0| / 2^max_depth.
CZOResult czo_extract_sparse(const LineFunction& f, const CZKernelSpec& t, const SmoothBumpDictionary& d, double q0,
                             double q1, int max_depth = 5);

// Every Q in D(Q0) down to |Q0| / 2^depth: worst P^2r_Q(|T(f 1_3Q)|) / ((1/r) P^r_Q(M^s_3Q f))
// and worst M#_Q f / M^s_3Q f, r = 1/32.
struct QGridAudit {
  double eston = 0.0;
  double sharp = 0.0;
  Cube eston_witness{};
  Cube sharp_witness{};
  std::size_t cubes = 0;
};
QGridAudit qgrid_audit(const LineFunction& f, const CZKernelSpec& t, const SmoothBumpDictionary& d, double q0,
                       double q1, int depth);

struct HilbertSharpnessPoint {
  double eps = 0.0;
  double aq = 0.0;
  double h_norm = 0.0;
  double ms_norm = 0.0;
  double ratio = 0.0;
};
struct HilbertSharpnessReport {
  std::vector<HilbertSharpnessPoint> points;
  double slope = 0.0;      // log ratio against log [w]_{A_q}
  double ms_spread = 0.0;  // max / min of ||M^s f||
  double moment_error = 0.0;
  int m = 0;
  double s = 0.0;
  double p = 0.0;
  double q = 0.0;
};
// Power weights w_eps = eps x^{eps-1} on (0,1), 1 elsewhere; M^s f on [-half_width, half_width).
HilbertSharpnessReport hilbert_sharpness_experiment(double p, double s, double q, const std::vector<double>& eps_list,
                                                    std::size_t dict_size = 8, std::size_t cells = 4096,
                                                    double half_width = 16.0);

}  // namespace sparsedom
