#pragma once

#include <map>
#include <string>
#include <vector>

#include "config.hpp"
#include "sparsedom/sparse_family.hpp"

namespace sparsedom::tools {

// Per-point data, flattened by the csv and gnuplot emitters.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string id;
  ExperimentConfig config;  // resolved: defaults filled in
  bool pass = true;
  std::vector<DominationReport> checks;
  std::map<std::string, double> summary;
  std::vector<Table> tables;
  std::vector<std::string> notes;
};

const std::vector<std::string>& experiment_ids();

// Throws ConfigError on an invalid config.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Merges per-repetition check lists position by position, in rep order:
// worst constant and its witness, key-wise max of measured values, pass = all.
std::vector<DominationReport> merge_reps(const std::vector<std::vector<DominationReport>>& reps,
                                         std::uint64_t base_seed);

// |value - target| <= tol, reported as best_constant against proof_constant = tol.
DominationReport tolerance_check(std::string name, double value, double target, double tol);
// value <= bound
DominationReport bound_check(std::string name, double value, double bound);

}  // namespace sparsedom::tools
