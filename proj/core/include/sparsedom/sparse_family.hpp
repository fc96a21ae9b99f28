#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

// A measurable set in the flat form: sorted cell indices.
struct FlatSet {
  std::vector<std::uint32_t> cells;
  double value = 0.0;  // ordering key, e.g. |<f>_R|
  std::string label;
};

struct FlatFamily {
  std::vector<double> cell_measure;
  std::vector<FlatSet> sets;
  std::vector<std::vector<std::uint32_t>> witnesses;  // empty or one per set

  double measure(const std::vector<std::uint32_t>& cells) const;
};

struct SparseFamily {
  GridPtr grid;
  // Adapted form: levels[k] holds the sorted indices of the level-k cubes of S_k.
  std::vector<std::vector<std::int64_t>> levels;
  std::optional<FlatFamily> flat;
  Ratio eta{1, 2};

  static SparseFamily adapted(GridPtr g);
  bool is_flat() const { return flat.has_value(); }
  void add(const Cube& q);
  bool contains(const Cube& q) const;
  std::size_t size() const;
  std::vector<Cube> cubes() const;
  // Leaf indicator of S_k.
  std::vector<char> indicator(int k) const;
  void normalize();
};

struct DominationReport {
  std::string inequality;
  double best_constant = 0.0;  // max lhs/rhs, 0/0 = 0, x/0 = inf
  std::size_t witness = 0;
  std::optional<double> proof_constant;  // empty means reported only
  bool pass = true;
  std::map<std::string, double> measured;
  std::vector<std::string> notes;
};

DominationReport check_domination(const std::vector<double>& lhs, const std::vector<double>& rhs,
                                  std::optional<double> proof_constant, std::string name = "domination");
DominationReport check_domination(const GridFunction& lhs, const GridFunction& rhs,
                                  std::optional<double> proof_constant, std::string name = "domination");

// Per-atom audit of the conditional form; for the flat form audits stored
// witnesses or, if absent, builds E_i = S_i minus earlier sets.
DominationReport verify_sparsity(const SparseFamily& s, Ratio eta);
DominationReport verify_flat_sparsity(FlatFamily& fam, Ratio eta);

// nu_0 = first level with x in S_m, nu_{j+1} the next one.
std::vector<StoppingTime> to_stopping_times(const SparseFamily& s);
SparseFamily from_stopping_times(const GridPtr& g, const std::vector<StoppingTime>& nus);
// E[1_{nu_{j+1} < inf} | F_{nu_j}] <= bound on {nu_j < inf}; best_constant is the worst conditional mass.
DominationReport check_sparse_sequence(const std::vector<StoppingTime>& nus, Ratio bound);

// Nested random family: each chosen cube gets disjoint strict subcubes of
// total mass at most (1 - eta)|A|.
SparseFamily random_sparse_family(const GridPtr& g, std::uint64_t seed, Ratio eta);

enum class SparseMode { sum_A, max_M, cancellative_C };
GridFunction apply_sparse(const GridFunction& f, const SparseFamily& s, SparseMode mode, Ratio r = {1, 2});
// Flat-form operators over cells.
std::vector<double> apply_sparse_flat(const std::vector<double>& f, const FlatFamily& fam, SparseMode mode,
                                      Ratio r = {1, 2});

inline double ratio_or_inf(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace sparsedom
