#pragma once

#include <cstdint>
#include <string>

#include "pbflow/expansion.hpp"
#include "pbflow/ns_solver.hpp"

namespace pbflow {

// Run configuration: geometry, boundary data, family parameters, numerics,
// sweep axes and output control. Parsed from a JSON file; see the repository
// README for the documented schema.
struct RunConfig {
  BoundaryData boundary;        // includes r0
  double delta = 0.5;
  double c_tilde = 1.0;         // feasible sign resolved by make_shear_profile
  double epsilon = 0.05;        // single-solve viscosity parameter
  ExpansionOptions expansion;   // n_theta, n_radial, layers, gamma, K, ...
  NSOptions ns;                 // tol, max_iter, line_search
  std::vector<double> sweep_epsilons{0.1, 0.07, 0.05, 0.035, 0.025};
  std::vector<double> sweep_deltas{0.0, 0.25, 0.5, 0.75, 1.0};
  double family_eta = 0.02;     // eta used by the delta-family sweep
  std::string output_dir = "out";
  bool plots = false;
  bool deterministic = true;
  int jobs = 1;

  void validate() const;
  ShearProfile profile() const { return make_shear_profile(boundary, delta, c_tilde); }
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);

// Hash of the semantically meaningful content (whitespace and key order do
// not matter; any field change does).
std::uint64_t config_hash(const RunConfig& cfg);
// Same but ignoring epsilon and the sweep axes: keys the epsilon-independent
// expansion artifacts.
std::uint64_t expansion_hash(const RunConfig& cfg);

std::string hash_hex(std::uint64_t h);

}  // namespace pbflow
