#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/haar_shift.hpp"
#include "sparsedom/sparse_family.hpp"

namespace sparsedom {

enum class WeightKind { constant, flat_bump, power, grid };

// A weight on [0,1). flat_bump is eps on [0, bump_end) and 1 elsewhere;
// power is eps x^{eps-1}. Cell masses use closed-form primitives.
struct Weight {
  WeightKind kind = WeightKind::constant;
  double eps = 1.0;
  double scale = 1.0;
  double bump_end = 0.5;
  std::vector<double> density;  // grid kind: per-cell density on 2^k cells

  static Weight constant(double c = 1.0);
  static Weight flat_bump(double eps, double bump_end = 0.5);
  static Weight power(double eps);
  static Weight from_grid(std::vector<double> density);

  // int_a^b w and int_a^b w^{-1/(q-1)} for 0 <= a < b <= 1.
  double mass(double a, double b) const;
  double dual_mass(double a, double b, double q) const;
  std::string name() const;
};

// Cell masses w(cell) and sigma(cell) on 2^depth uniform cells.
std::vector<double> cell_masses(const Weight& w, int depth);
std::vector<double> dual_cell_masses(const Weight& w, int depth, double q);

enum class CubeFamily { dyadic, all_intervals };

struct Characteristic {
  double value = 1.0;
  std::size_t lo = 0;  // witness interval in cells [lo, hi)
  std::size_t hi = 1;
};
Characteristic aq_characteristic(const Weight& w, double q, CubeFamily family, int depth);
// Fujii-Wilson constant over dyadic cubes.
double ainf_characteristic(const Weight& w, int depth);

double weighted_norm(const std::vector<double>& f, const Weight& w, double p);
double weighted_norm_cells(const std::vector<double>& f, const std::vector<double>& wmass, double p);

// (|E|/|Q|)^q <= [w]_{A_q} w(E)/w(Q) on random (Q, E) pairs; best_constant is the worst lhs/rhs.
DominationReport check_reverse_doubling(const Weight& w, double q, double aq, int depth, int pairs, std::uint64_t seed);

// sum_Q P^r_Q(|f|)^p w(Q) against [w]_{A_q} (2/r)^q 2^p ||f||^p (p = t).
struct WeightedSparseOutcome {
  DominationReport report;
  double lhs = 0.0;
  double rhs = 0.0;
  double aq = 1.0;
};
WeightedSparseOutcome weighted_sparse_experiment(const SparseFamily& s, const GridFunction& f, const Weight& w,
                                                 double p, Ratio r, double q);

struct SlopePoint {
  double eps = 0.0;
  double aq = 0.0;
  double ainf = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};
struct SlopeReport {
  std::vector<SlopePoint> points;
  double slope_ratio_vs_aq = 0.0;
  double slope_aq_vs_eps = 0.0;
};
// Least squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// f = eps^{-1/p} 1_R, S = {Q_0}, R = [0, 2r).
SlopeReport sharpness_flat(double p, Ratio r, double q, const std::vector<double>& eps_list, int depth);
// f = 1_{Q_0}, S = {[0,2^-k)}: chain sum evaluated in closed form.
SlopeReport sharpness_power(double p, double t, double q, const std::vector<double>& eps_list, int depth);

// ||Sh f||_{L^p(w)} / ||M f||_{L^p(w)} along power weights on the grid of f.
SlopeReport haar_weighted_slope(const ShiftOperator& op, const GridFunction& f, double p, double q,
                                const std::vector<double>& eps_list);

// 2^-3, ..., 2^-8
std::vector<double> default_eps_list();

}  // namespace sparsedom
