// Acceptance suite: runs every verification criterion at the pinned desk-scale
// parameters and prints one pass/fail line per criterion. Exit code 0 when all
// pass, 1 otherwise.

#include <cstdio>

#include "pbflow/criteria.hpp"

using namespace pbflow;

int main() {
  RunConfig cfg;  // defaults: r0=0.5, alpha=2, beta=1.5, eta=0.05, f=g=cos
  cfg.delta = 0.5;
  cfg.c_tilde = 1.0;
  cfg.expansion.K = 3;  // build the stretch tier as well
  cfg.sweep_epsilons = {0.1, 0.07, 0.05, 0.035, 0.025};
  cfg.sweep_deltas = {0.0, 0.25, 0.5, 0.75, 1.0};
  cfg.family_eta = 0.02;
  cfg.validate();

  std::printf("acceptance run: r0=%.3g alpha=%.3g beta=%.3g eta=%.3g delta=%.3g K=%d\n",
              cfg.boundary.r0, cfg.boundary.alpha, cfg.boundary.beta, cfg.boundary.eta, cfg.delta,
              cfg.expansion.K);
  std::fflush(stdout);

  CriteriaReport rep;
  try {
    rep = run_criteria(cfg);
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const auto& c : rep.results) {
    std::printf("[%s] criterion %2d: %s\n       %s\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.detail.c_str());
    if (!c.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rep.results.size()) - failed,
              rep.results.size());
  return failed == 0 ? 0 : 1;
}
