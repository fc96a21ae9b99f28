#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/haar_shift.hpp"
#include "sparsedom/martingale.hpp"
#include "sparsedom/sparse_family.hpp"

namespace sparsedom {

struct LayeredResult {
  SparseFamily family;
  int layers = 0;  // number of threshold rounds run
};
LayeredResult extract_layered(const GridFunction& f);
// M f <= 2 P_r(M_S f), where M_S f = sup_k 1_{S_k}|E_k f|.
DominationReport audit_layered(const GridFunction& f, const SparseFamily& s, Ratio r = {1, 2});

struct GreedyStep {
  std::size_t set = 0;
  double gamma = 0.0;
  bool accepted = false;
};
struct GreedyResult {
  FlatFamily family;                  // accepted sets with witnesses R \ shadow
  std::vector<std::size_t> accepted;  // indices into the input
  std::vector<GreedyStep> trace;
};
// Input sets are ordered by descending value, ties kept in input order.
GreedyResult extract_greedy(const FlatFamily& e);
// M_E f <= P_E^{1/2}(M_S f) on cells, constant 1.
DominationReport audit_greedy(const std::vector<double>& f, const FlatFamily& e, const FlatFamily& s);
// |<f>_R| for every set, stored as value.
void attach_averages(FlatFamily& e, const std::vector<double>& f);

enum class StoppingOperator { transform, square };

struct StoppingNode {
  Cube cube;
  double threshold = 0.0;   // r^{-1/2} P_A^r(M_(k) f)
  double percentile = 0.0;  // P_A^r(M_(k) f)
  double stopped_mass = 0.0;
  bool within_bound = true;
};
struct StoppingResult {
  std::vector<StoppingTime> nus;
  std::vector<StoppingNode> nodes;
  DominationReport node_bound;  // mu(B) <= mu(A)/2 per node
  DominationReport sequence;    // sparse stopping sequence audit
  DominationReport domination;  // T* f (or S f) against the sparse bound
  Ratio r{1, 10};
};
StoppingResult extract_stopping(const GridFunction& f, StoppingOperator op, const PredictableSigns& sigma,
                                std::optional<Ratio> r = std::nullopt);

// Per-cube median bound for T* and S at level k. Returns the worst ratio seen.
DominationReport audit_median_bound(const GridFunction& f, const PredictableSigns& sigma, StoppingOperator op,
                                    Ratio r);

struct HaarResult {
  SparseFamily family;
  DominationReport sparsity;
  DominationReport domination;
  DominationReport child_bound;  // children measure <= |Q|/2
  double removed_mean = 0.0;
  Ratio r{1, 2};
  int c0 = 0;
  double norm_sup = 0.0;
};
HaarResult extract_haar_shift(const GridFunction& f, const ShiftOperator& op, double norm_sup, const Cube& root);
// P_Q^{C0 r}(Sh*_Q f) <= (norm^2 / sqrt r) P_Q^r(M_Q f) on every cube.
DominationReport audit_local_median(const GridFunction& f, const ShiftOperator& op, double norm_sup, Ratio r);

}  // namespace sparsedom
