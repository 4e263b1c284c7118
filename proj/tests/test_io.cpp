#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "pbflow/artifacts.hpp"

using namespace pbflow;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("pbflow_test_" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config: parse, defaults, validation") {
  const char* text = R"({
    "geometry": {"r0": 0.5},
    "boundary": {"alpha": 2.0, "beta": 1.5, "eta": 0.05,
                 "f_modes": [[1, 0.5, 0.0]], "g_modes": [[1, 0.5, 0.0]]},
    "family": {"delta": 0.5, "c_tilde": 1.0},
    "epsilon": 0.05,
    "numerics": {"n_theta": 32, "K": 1},
    "sweep": {"epsilons": [0.1, 0.05], "deltas": [0.0, 1.0]},
    "output": {"dir": "out", "deterministic": true}
  })";
  RunConfig c = config_from_json_text(text);
  CHECK(c.boundary.alpha == 2.0);
  CHECK(c.expansion.K == 1);
  CHECK(c.sweep_epsilons.size() == 2);

  CHECK_THROWS_AS(config_from_json_text("{\"epsilon\": -1}"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{\"sweep\": {\"epsilons\": []}}"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
  // ascending sweep rejected
  CHECK_THROWS_AS(config_from_json_text("{\"sweep\": {\"epsilons\": [0.05, 0.1]}}"), ConfigError);
}

TEST_CASE("config hash: whitespace-insensitive, field-sensitive") {
  const char* a = R"({"epsilon": 0.05, "family": {"delta": 0.5}})";
  const char* b = R"({
      "family":    {"delta": 0.5},
      "epsilon":   0.05
  })";
  RunConfig ca = config_from_json_text(a);
  RunConfig cb = config_from_json_text(b);
  CHECK(config_hash(ca) == config_hash(cb));

  RunConfig cc = ca;
  cc.delta = 0.25;
  CHECK(config_hash(cc) != config_hash(ca));

  // epsilon changes the run hash but not the expansion hash
  RunConfig cd = ca;
  cd.epsilon = 0.1;
  CHECK(config_hash(cd) != config_hash(ca));
  CHECK(expansion_hash(cd) == expansion_hash(ca));
}

TEST_CASE("expansion artifact round trip") {
  BoundaryData bd;
  bd.eta = 0.05;
  ShearProfile prof = make_shear_profile(bd, 0.5, 1.0);
  ExpansionOptions opt;
  opt.K = 1;
  Expansion ex = build_expansion(bd, prof, opt);

  TempDir tmp;
  const std::string path = (tmp.path / "expansion.json").string();
  save_expansion(ex, path);
  Expansion back = load_expansion(path);

  CHECK(back.prof.a0 == ex.prof.a0);
  CHECK(back.opt.K == 1);
  CHECK(norm_max(back.outer.lead.u_p0 - ex.outer.lead.u_p0) == 0.0);
  CHECK(norm_max(back.euler[0].u - ex.euler[0].u) == 0.0);
  CHECK(back.outer.orders[0].A_inf == ex.outer.orders[0].A_inf);
  CHECK(back.diag.g2_measured == ex.diag.g2_measured);

  // a reloaded expansion assembles the identical composite
  CompositeSolution c1 = assemble(ex, 1, 0.1);
  CompositeSolution c2 = assemble(back, 1, 0.1);
  CHECK(norm_max(c1.u - c2.u) == 0.0);
  CHECK(norm_max(c1.v - c2.v) == 0.0);
}

TEST_CASE("ns state artifact round trip") {
  auto theta = std::make_shared<const ThetaGrid>(16);
  auto radial = Grid1D::radial(0.5, 48);
  ShearProfile prof;
  prof.r0 = 0.5;
  prof.a0 = 1.3;
  prof.b0 = 0.4;
  NSState s = shear_state(prof, 0.1, theta, radial);
  s.lambda = 1.25e-12;

  TempDir tmp;
  const std::string path = (tmp.path / "state.json").string();
  save_ns_state(s, path);
  NSState back = load_ns_state(path);
  CHECK(back.epsilon == s.epsilon);
  CHECK(back.G == s.G);
  CHECK(back.lambda == s.lambda);
  CHECK((back.u.v - s.u.v).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.p_int - s.p_int).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("manifest: save, load, artifact validation") {
  TempDir tmp;
  const std::string art = (tmp.path / "field.json").string();
  {
    std::FILE* f = std::fopen(art.c_str(), "w");
    std::fputs("{\"x\": 1}\n", f);
    std::fclose(f);
  }
  RunManifest m;
  m.config_hash = "abc";
  m.artifacts["field"] = "field.json";
  m.artifact_hashes["field"] = hash_hex(file_hash(art));
  m.timings_sec["prandtl"] = 1.5;
  const std::string mpath = (tmp.path / "manifest.json").string();
  save_manifest(m, mpath);

  RunManifest back = load_manifest(mpath);
  CHECK(back.config_hash == "abc");
  CHECK(back.has_valid("field", tmp.path.string()));
  CHECK(!back.has_valid("missing", tmp.path.string()));

  // content change invalidates the cache entry
  {
    std::FILE* f = std::fopen(art.c_str(), "w");
    std::fputs("{\"x\": 2}\n", f);
    std::fclose(f);
  }
  CHECK(!back.has_valid("field", tmp.path.string()));

  // absent manifest loads as empty
  RunManifest none = load_manifest((tmp.path / "nope.json").string());
  CHECK(none.config_hash.empty());
}
