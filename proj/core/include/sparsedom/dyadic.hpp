#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

// Per-cube averages at level k (length 2^k).
std::vector<double> level_averages(const GridFunction& f, int k);
// averages[k][i] for every level.
std::vector<std::vector<double>> all_level_averages(const GridFunction& f);
// Expand per-cube values at level k to a leaf vector.
GridFunction broadcast(const GridPtr& g, int k, const std::vector<double>& cube_values);

GridFunction cond_expect(const GridFunction& f, int k);
GridFunction mart_diff(const GridFunction& f, int k);

// Smallest attained value lambda with mass{v > lambda} <= r * total.
// Entries are (value, mass); the vector is reordered.
double percentile_of(std::vector<std::pair<double, double>>& value_mass, double total, Ratio r);
// Same, for values carrying equal masses.
double percentile_uniform(std::vector<double>& values, Ratio r);

double percentile_on_cube(const GridFunction& f, const Cube& q, Ratio r);
GridFunction cond_percentile(const GridFunction& f, int k, Ratio r);
// P_nu^r f: on {nu = k} equal to P_k^r f, zero where nu is infinite.
GridFunction stopped_percentile(const GridFunction& f, const StoppingTime& nu, Ratio r);

// sup over start <= k <= stop of |E_k f|. stop < 0 means the leaf level.
GridFunction doob_maximal(const GridFunction& f, int start = 0, int stop = -1);
GridFunction doob_maximal(const GridFunction& f, const StoppingTime& start, int stop = -1);
// sup over k <= stop of P_k^r |f|.
GridFunction percentile_maximal(const GridFunction& f, Ratio r, int stop = -1);

// M_Q f restricted to the leaves of q (local dyadic maximal function).
std::vector<double> local_maximal(const GridFunction& f, const Cube& q);
// Local dyadic maximal function of an indicator given on the leaves of q.
std::vector<double> local_maximal_of_set(const DyadicGrid& g, const Cube& q, std::span<const char> inside);

// Property checks used by tests and experiments.
struct WeakTypeCheck {
  bool pass = true;
  double worst_lambda = 0.0;
  double lhs = 0.0;  // mu{P_r f > lambda}
  double rhs = 0.0;  // mu{|f| > lambda}
};
WeakTypeCheck check_percentile_weak_type(const GridFunction& f, const GridFunction& pf, Ratio r);

struct CubeViolation {
  bool pass = true;
  Cube cube{};
};
// Properties (1) and (2) of the conditional percentile on every level-k cube.
CubeViolation check_percentile_properties(const GridFunction& f, const GridFunction& pk, int k, Ratio r);

}  // namespace sparsedom
