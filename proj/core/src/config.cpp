#include "pbflow/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pbflow {

using nlohmann::json;

void RunConfig::validate() const {
  boundary.validate();
  if (delta < 0.0) throw ConfigError("config: family.delta must be >= 0");
  if (!(epsilon > 0.0)) throw ConfigError("config: epsilon must be > 0");
  if (expansion.K < 0 || expansion.K > 3) throw ConfigError("config: numerics.K in 0..3");
  if (expansion.n_theta < 8 || expansion.n_theta % 2 != 0)
    throw ConfigError("config: numerics.n_theta must be even and >= 8");
  if (expansion.n_radial < 16) throw ConfigError("config: numerics.n_radial too small");
  if (!(expansion.gamma > 0.0)) throw ConfigError("config: numerics.gamma must be > 0");
  if (!(expansion.fp_tol > 0.0) || !(ns.tol > 0.0) || !(expansion.gamma_check_tol > 0.0))
    throw ConfigError("config: tolerances must be positive");
  if (sweep_epsilons.empty()) throw ConfigError("config: sweep.epsilons must be non-empty");
  if (sweep_deltas.empty()) throw ConfigError("config: sweep.deltas must be non-empty");
  for (std::size_t i = 1; i < sweep_epsilons.size(); ++i)
    if (sweep_epsilons[i] >= sweep_epsilons[i - 1])
      throw ConfigError("config: sweep.epsilons must be strictly descending");
  if (jobs < 1) throw ConfigError("config: output.jobs must be >= 1");
}

namespace {

std::vector<FourierMode> parse_modes(const json& j, const char* what) {
  std::vector<FourierMode> out;
  if (!j.is_array()) throw ConfigError(std::string("config: ") + what + " must be an array");
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3)
      throw ConfigError(std::string("config: ") + what + " entries are (mode, re, im) triples");
    FourierMode m;
    m.k = e[0].get<int>();
    m.re = e[1].get<double>();
    m.im = e[2].get<double>();
    out.push_back(m);
  }
  return out;
}

json modes_to_json(const std::vector<FourierMode>& modes) {
  json out = json::array();
  for (const auto& m : modes) out.push_back({m.k, m.re, m.im});
  return out;
}

json canonical_json(const RunConfig& c) {
  json j;
  j["geometry"]["r0"] = c.boundary.r0;
  j["boundary"]["alpha"] = c.boundary.alpha;
  j["boundary"]["beta"] = c.boundary.beta;
  j["boundary"]["eta"] = c.boundary.eta;
  j["boundary"]["f_modes"] = modes_to_json(c.boundary.f_modes);
  j["boundary"]["g_modes"] = modes_to_json(c.boundary.g_modes);
  j["family"]["delta"] = c.delta;
  j["family"]["c_tilde"] = c.c_tilde;
  j["epsilon"] = c.epsilon;
  j["numerics"]["n_theta"] = c.expansion.n_theta;
  j["numerics"]["n_radial"] = c.expansion.n_radial;
  j["numerics"]["n_psi"] = c.expansion.n_psi;
  j["numerics"]["n_layer"] = c.expansion.n_layer;
  j["numerics"]["psi_depth"] = c.expansion.psi_depth;
  j["numerics"]["stretch"] = c.expansion.stretch;
  j["numerics"]["fp_tol"] = c.expansion.fp_tol;
  j["numerics"]["fp_max_iter"] = c.expansion.fp_max_iter;
  j["numerics"]["gamma"] = c.expansion.gamma;
  j["numerics"]["gamma_crosscheck"] = c.expansion.gamma_crosscheck;
  j["numerics"]["gamma_check_tol"] = c.expansion.gamma_check_tol;
  j["numerics"]["K"] = c.expansion.K;
  j["numerics"]["newton_tol"] = c.ns.tol;
  j["numerics"]["newton_max_iter"] = c.ns.max_iter;
  j["numerics"]["line_search"] = c.ns.line_search;
  j["sweep"]["epsilons"] = c.sweep_epsilons;
  j["sweep"]["deltas"] = c.sweep_deltas;
  j["sweep"]["family_eta"] = c.family_eta;
  j["output"]["dir"] = c.output_dir;
  j["output"]["plots"] = c.plots;
  j["output"]["deterministic"] = c.deterministic;
  j["output"]["jobs"] = c.jobs;
  return j;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  RunConfig c;
  try {
    if (j.contains("geometry")) c.boundary.r0 = j["geometry"].value("r0", c.boundary.r0);
    if (j.contains("boundary")) {
      const auto& b = j["boundary"];
      c.boundary.alpha = b.value("alpha", c.boundary.alpha);
      c.boundary.beta = b.value("beta", c.boundary.beta);
      c.boundary.eta = b.value("eta", c.boundary.eta);
      if (b.contains("f_modes")) c.boundary.f_modes = parse_modes(b["f_modes"], "boundary.f_modes");
      if (b.contains("g_modes")) c.boundary.g_modes = parse_modes(b["g_modes"], "boundary.g_modes");
    }
    if (j.contains("family")) {
      c.delta = j["family"].value("delta", c.delta);
      c.c_tilde = j["family"].value("c_tilde", c.c_tilde);
    }
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("numerics")) {
      const auto& n = j["numerics"];
      c.expansion.n_theta = n.value("n_theta", c.expansion.n_theta);
      c.expansion.n_radial = n.value("n_radial", c.expansion.n_radial);
      c.expansion.n_psi = n.value("n_psi", c.expansion.n_psi);
      c.expansion.n_layer = n.value("n_layer", c.expansion.n_layer);
      c.expansion.psi_depth = n.value("psi_depth", c.expansion.psi_depth);
      c.expansion.stretch = n.value("stretch", c.expansion.stretch);
      c.expansion.fp_tol = n.value("fp_tol", c.expansion.fp_tol);
      c.expansion.fp_max_iter = n.value("fp_max_iter", c.expansion.fp_max_iter);
      c.expansion.gamma = n.value("gamma", c.expansion.gamma);
      c.expansion.gamma_crosscheck = n.value("gamma_crosscheck", c.expansion.gamma_crosscheck);
      c.expansion.gamma_check_tol = n.value("gamma_check_tol", c.expansion.gamma_check_tol);
      c.expansion.K = n.value("K", c.expansion.K);
      c.ns.tol = n.value("newton_tol", c.ns.tol);
      c.ns.max_iter = n.value("newton_max_iter", c.ns.max_iter);
      c.ns.line_search = n.value("line_search", c.ns.line_search);
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      if (s.contains("epsilons")) c.sweep_epsilons = s["epsilons"].get<std::vector<double>>();
      if (s.contains("deltas")) c.sweep_deltas = s["deltas"].get<std::vector<double>>();
      c.family_eta = s.value("family_eta", c.family_eta);
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      c.output_dir = o.value("dir", c.output_dir);
      c.plots = o.value("plots", c.plots);
      c.deterministic = o.value("deterministic", c.deterministic);
      c.jobs = o.value("jobs", c.jobs);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: schema error: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const RunConfig& c) { return canonical_json(c).dump(2) + "\n"; }

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::uint64_t config_hash(const RunConfig& c) { return fnv1a(canonical_json(c).dump()); }

std::uint64_t expansion_hash(const RunConfig& c) {
  json j = canonical_json(c);
  j.erase("epsilon");
  j.erase("sweep");
  j.erase("output");
  j["numerics"].erase("newton_tol");
  j["numerics"].erase("newton_max_iter");
  j["numerics"].erase("line_search");
  return fnv1a(j.dump());
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace pbflow
