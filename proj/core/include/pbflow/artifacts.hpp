#pragma once

#include <map>
#include <string>

#include "pbflow/config.hpp"

namespace pbflow {

// JSON artifact serialization. Artifacts round-trip exactly (doubles are
// written with shortest-round-trip formatting) and grids are rebuilt from
// their parameters, which is deterministic.

void save_expansion(const Expansion& ex, const std::string& path);
Expansion load_expansion(const std::string& path);

void save_ns_state(const NSState& s, const std::string& path);
NSState load_ns_state(const std::string& path);

std::uint64_t file_hash(const std::string& path);

// Cache manifest for one output directory.
struct RunManifest {
  std::string config_hash;
  std::map<std::string, std::string> artifacts;        // name -> relative path
  std::map<std::string, std::string> artifact_hashes;  // name -> content hash
  std::map<std::string, double> timings_sec;           // stage -> wall clock
  std::string version = "1";

  bool has_valid(const std::string& name, const std::string& dir) const;
};

void save_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);  // empty manifest if absent

}  // namespace pbflow
