#pragma once

#include "pbflow/artifacts.hpp"
#include "pbflow/verify.hpp"

namespace pbflow {

// One acceptance criterion outcome with its measured values.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, human readable
};

struct CriteriaReport {
  std::vector<CriterionResult> results;
  // per-point sweep data for the CSV / plots
  SweepReport eps_sweep;
  FamilyReport family;
  std::vector<double> composite_eps;
  std::vector<double> composite_ru_k1;
  std::vector<double> composite_ru_k3;  // empty unless the K=3 tier was built
  bool all_pass() const;
};

// Runs every acceptance criterion at the configured parameters. The
// spec-default configuration reproduces the published acceptance gate; the
// K=3 stretch tier of criterion 7 runs when cfg.expansion.K == 3.
CriteriaReport run_criteria(const RunConfig& cfg);

}  // namespace pbflow
