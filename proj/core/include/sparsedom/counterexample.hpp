#pragma once

#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

// f_J = (f o phi_J) 1_J for every J in D_N(I), on a grid of depth depth(f) + N.
GridFunction build_RN(const GridFunction& f, int n_levels);
// A sum_{n=2}^{2^N-3} (-1)^n f_{J_n} + 2^{N-1} f_{[1-2^{-N+1},1)}.
GridFunction build_TN(const GridFunction& f, int n_levels, double a);

// Relative indices of D'_N inside a cube.
std::vector<Cube> d_prime(const Cube& j, int n_levels);

struct TNCheck {
  bool property1 = true;  // |<T f>_J| >= A |<f>_I| on D'_N
  bool property2 = true;  // <T f>_{[0,2^-k)} = 0, k = 1..N
  bool property3 = true;  // <T f>_I = <f>_I
  double min_ratio = 0.0; // min |<T f>_J| / |<f>_I| over D'_N
};
TNCheck check_TN(const GridFunction& f, const GridFunction& tf, int n_levels, double a);

struct ForcedAudit {
  int n = 0;
  std::vector<Cube> forced;
  double carleson = 1.0;  // max over Q in F of sum_{P subset Q, P in F} |P| / |Q|
  double best_sparsity = 1.0;
};
struct CounterexampleResult {
  GridFunction f;
  ForcedAudit audit;
};
CounterexampleResult counterexample_sequence(int n, int per_layer_n, double a, double c0);

}  // namespace sparsedom
