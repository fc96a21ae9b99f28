#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

struct HaarCoefficient {
  Cube q;
  Cube t;
  Cube s;
  double value = 0.0;
};

struct HaarShiftSpec {
  int t = 0;
  int s = 0;
  std::vector<HaarCoefficient> alpha;

  double norm_bound() const;
  // Throws if a key is outside D_t(Q) x D_s(Q) or below the grid.
  void validate(int depth) const;
  HaarShiftSpec adjoint() const;

  // alpha^Q_{QQ} = 1 for every Q above the leaf level.
  static HaarShiftSpec identity(int depth);
  // Every admissible (Q,T,S) with an i.i.d. uniform [-1,1] coefficient.
  static HaarShiftSpec random(int depth, int t, int s, std::uint64_t seed);
};

// <f, h_Q> for all cubes above the leaf level: coeff[level][index].
std::vector<std::vector<double>> haar_expand(const GridFunction& f);
GridFunction haar_synthesize(const GridPtr& g, double mean, const std::vector<std::vector<double>>& coeff);

// Precomputed coefficient buckets, one per outer cube Q.
class ShiftOperator {
 public:
  ShiftOperator(GridPtr g, HaarShiftSpec spec);

  const HaarShiftSpec& spec() const { return spec_; }
  const GridPtr& grid() const { return grid_; }

  // layers[k - root.level][x - leaf_begin(root)]: contribution of the outer
  // cubes of level k containing x, for outer cubes inside root.
  std::vector<std::vector<double>> layers(std::span<const double> v_root, const Cube& root) const;
  // Adjoint of u -> layers: returns sum_k (layer_k)^T u_k on root leaves.
  std::vector<double> adjoint_layers(const std::vector<std::vector<double>>& u, const Cube& root) const;

  // Sh*_Q from layers computed at an enclosing root.
  static std::vector<double> window_sup(const std::vector<std::vector<double>>& layers, int first_layer,
                                        std::size_t begin, std::size_t end);

 private:
  GridPtr grid_;
  HaarShiftSpec spec_;
  std::vector<std::vector<std::size_t>> bucket_start_;  // per level, per cube, +1 sentinel
  std::vector<HaarCoefficient> sorted_;
};

GridFunction apply_shift(const GridFunction& f, const HaarShiftSpec& spec, std::optional<Cube> root = std::nullopt);
GridFunction shift_max_trunc(const GridFunction& f, const HaarShiftSpec& spec,
                             std::optional<Cube> root = std::nullopt);

struct ShiftNorms {
  double linear = 0.0;       // ||Sh_Q|| at the root
  double maximal_sup = 0.0;  // max over cubes of ||Sh*_Q||
  Cube argmax{};
  int iterations = 50;
};
// Power iteration on the finite grid (nonlinear for the maximal truncation).
double measure_linear_norm(const ShiftOperator& op, const Cube& root, int iterations = 50);
double measure_maximal_norm(const ShiftOperator& op, const Cube& root, int iterations = 50);
ShiftNorms measure_shift_norms(const ShiftOperator& op, int iterations = 50, int max_level = -1);

// A^{(n)} inside q: n-fold {M_Q 1_A > 1/3}. inside is indexed by leaves of q.
std::vector<char> enlarge(const DyadicGrid& g, const Cube& q, std::vector<char> inside, int n);
// Maximal dyadic cubes of q contained in a leaf set (given on leaves of q).
std::vector<Cube> maximal_cubes(const DyadicGrid& g, const Cube& q, std::span<const char> inside);

inline int haar_c0(int t, int s) {
  int c = 1;
  for (int i = 0; i < s + t + 1; ++i) c *= 3;
  return c + 1;
}

}  // namespace sparsedom
