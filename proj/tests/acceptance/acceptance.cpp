// One line per acceptance criterion; exit status 1 if any criterion fails.
// --criterion N runs a single criterion.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "report.hpp"

using namespace sparsedom::tools;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> experiments;
};

const std::vector<Criterion> kCriteria = {
    {1, "percentile weak type, exact", {"percentile-weak-type"}},
    {2, "layered extraction: 1/2-sparse and M f <= 2 P_1/2(M_S f)", {"layered-domination"}},
    {3, "H1 characterization: ||A_S f||_1 <= 2||Mf||_1, ||Mf||_1 <= 4||A_S f||_1", {"theoremB"}},
    {4, "greedy and biparameter domination with constant 1", {"greedy-domination", "biparam-strong-max"}},
    {5, "martingale transform and square function stopping sequences", {"stopping-mt", "stopping-sf"}},
    {6, "Haar shift sparse domination and local median bound", {"haar-shift-domination"}},
    {7, "C_S bound ||C_S f||_p^p <= 8 r^-2 ||f||_p^p", {"cs-lp-bound"}},
    {8, "T_N properties and forced-set sparsity decay", {"counterexample"}},
    {9, "weighted sparse bound with the explicit constant", {"weighted-sparse"}},
    {10, "sharpness slopes", {"weighted-sharpness-flat", "weighted-sharpness-power", "hilbert-sharpness"}},
    {11, "Euclidean bench: CZ pipeline and audit stability", {"czo-pipeline", "estonTF-audit"}},
};

std::map<std::string, std::string> first_runs;

bool run(const std::string& id, std::vector<std::string>& failures) {
  ExperimentConfig c;
  c.id = id;
  try {
    auto rep = run_experiment(c);
    first_runs[id] = emit_report(rep, "json", false);
    for (const auto& d : rep.checks)
      if (!d.pass) failures.push_back(id + ": " + d.inequality);
    return rep.pass;
  } catch (const std::exception& e) {
    failures.push_back(id + ": " + e.what());
    return false;
  }
}

void line(int n, bool pass, const std::string& title, double secs) {
  std::printf("criterion %2d: %s  %s (%.1f s)\n", n, pass ? "PASS" : "FAIL", title.c_str(), secs);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) only = std::atoi(argv[2]);
  if (argc != 1 && (only < 1 || only > 12)) {
    std::fprintf(stderr, "usage: %s [--criterion 1..12]\n", argv[0]);
    return 2;
  }
  bool all = true;
  for (const auto& c : kCriteria) {
    // determinism needs a first run of every experiment
    if (only && only != c.number && only != 12) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> failures;
    bool pass = true;
    for (const auto& id : c.experiments) pass = run(id, failures) && pass;
    if (only == 12) continue;
    line(c.number, pass, c.title, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    for (const auto& f : failures) std::printf("    failed: %s\n", f.c_str());
    all = all && pass;
  }
  if (only && only != 12) return all ? 0 : 1;

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> differ;
  for (const auto& id : experiment_ids()) {
    ExperimentConfig c;
    c.id = id;
    std::string again;
    try {
      again = emit_report(run_experiment(c), "json", false);
    } catch (const std::exception& e) {
      again = e.what();
    }
    auto it = first_runs.find(id);
    if (it == first_runs.end() || it->second != again) differ.push_back(id);
  }
  line(12, differ.empty(), "determinism: same seed gives byte-identical reports",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  for (const auto& id : differ) std::printf("    differs: %s\n", id.c_str());
  all = all && differ.empty();
  return all ? 0 : 1;
}
