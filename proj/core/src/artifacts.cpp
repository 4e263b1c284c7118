#include "pbflow/artifacts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pbflow {

using nlohmann::json;

namespace {

json grid_to_json(const Grid1D& g, double r0) {
  json j;
  switch (g.kind()) {
    case GridKind::radial:
      j["kind"] = "radial";
      j["r0"] = r0;
      break;
    case GridKind::layer_outer:
      j["kind"] = "layer_outer";
      j["depth"] = -g.span_min();
      break;
    case GridKind::layer_inner:
      j["kind"] = "layer_inner";
      j["depth"] = g.span_max();
      break;
  }
  j["n"] = g.size();
  return j;
}

std::shared_ptr<const Grid1D> grid_from_json(const json& j, double stretch) {
  const std::string kind = j.at("kind");
  const int n = j.at("n");
  if (kind == "radial") return Grid1D::radial(j.at("r0"), n);
  if (kind == "layer_outer") return Grid1D::layer(WallSide::outer, j.at("depth"), n, stretch);
  if (kind == "layer_inner") return Grid1D::layer(WallSide::inner, j.at("depth"), n, stretch);
  throw ConfigError("artifact: unknown grid kind " + kind);
}

json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
  j["data"] = std::move(data);
  return j;
}

Matrix matrix_from_json(const json& j) {
  const Eigen::Index rows = j.at("rows"), cols = j.at("cols");
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ConfigError("artifact: matrix size mismatch");
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[k++];
  return m;
}

json vector_to_json(const Vector& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Vector vector_from_json(const json& j) {
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i];
  return v;
}

json field_to_json(const Field2D& f, double r0) {
  json j;
  j["grid"] = grid_to_json(*f.grid, r0);
  j["values"] = matrix_to_json(f.v);
  return j;
}

Field2D field_from_json(const json& j, std::shared_ptr<const ThetaGrid> th, double stretch,
                        std::shared_ptr<const Grid1D> grid_hint = nullptr) {
  auto grid = grid_hint ? grid_hint : grid_from_json(j.at("grid"), stretch);
  return Field2D(th, grid, matrix_from_json(j.at("values")));
}

json bd_to_json(const BoundaryData& b) {
  json j;
  j["alpha"] = b.alpha;
  j["beta"] = b.beta;
  j["eta"] = b.eta;
  j["r0"] = b.r0;
  json fm = json::array(), gm = json::array();
  for (const auto& m : b.f_modes) fm.push_back({m.k, m.re, m.im});
  for (const auto& m : b.g_modes) gm.push_back({m.k, m.re, m.im});
  j["f_modes"] = fm;
  j["g_modes"] = gm;
  return j;
}

BoundaryData bd_from_json(const json& j) {
  BoundaryData b;
  b.alpha = j.at("alpha");
  b.beta = j.at("beta");
  b.eta = j.at("eta");
  b.r0 = j.at("r0");
  b.f_modes.clear();
  b.g_modes.clear();
  for (const auto& e : j.at("f_modes")) b.f_modes.push_back({e[0], e[1], e[2]});
  for (const auto& e : j.at("g_modes")) b.g_modes.push_back({e[0], e[1], e[2]});
  return b;
}

json wall_to_json(const WallExpansion& w, double r0) {
  json j;
  j["side"] = (w.side == WallSide::outer) ? "outer" : "inner";
  j["U_wall"] = w.U_wall;
  j["kappa"] = w.kappa;
  j["vm"]["Q"] = field_to_json(w.vm.Q, r0);
  j["vm"]["U"] = field_to_json(w.vm.U, r0);
  j["vm"]["ratios"] = w.vm.contraction_ratios;
  j["vm"]["iterations"] = w.vm.iterations;
  j["lead"]["u_p0"] = field_to_json(w.lead.u_p0, r0);
  j["lead"]["v_p1"] = field_to_json(w.lead.v_p1, r0);
  j["lead"]["p_p1"] = field_to_json(w.lead.p_p1, r0);
  j["lead"]["v_p1_wall"] = vector_to_json(w.lead.v_p1_wall);
  json orders = json::array();
  for (const auto& o : w.orders) {
    json oj;
    oj["k"] = o.k;
    oj["A_inf"] = o.A_inf;
    oj["gamma_check"] = o.gamma_check;
    oj["u_pk"] = field_to_json(o.u_pk, r0);
    oj["v_pk1"] = field_to_json(o.v_pk1, r0);
    if (o.p_pk1.theta) oj["p_pk1"] = field_to_json(o.p_pk1, r0);
    orders.push_back(std::move(oj));
  }
  j["orders"] = std::move(orders);
  return j;
}

WallExpansion wall_from_json(const json& j, std::shared_ptr<const ThetaGrid> th, double stretch) {
  WallExpansion w;
  w.side = (j.at("side") == "outer") ? WallSide::outer : WallSide::inner;
  w.U_wall = j.at("U_wall");
  w.kappa = j.at("kappa");
  w.vm.side = w.side;
  w.vm.theta = th;
  w.vm.Q = field_from_json(j.at("vm").at("Q"), th, stretch);
  w.vm.U = field_from_json(j.at("vm").at("U"), th, stretch, w.vm.Q.grid);
  w.vm.psi = w.vm.Q.grid;
  w.vm.U_wall = w.U_wall;
  w.vm.kappa = w.kappa;
  w.vm.contraction_ratios = j.at("vm").at("ratios").get<std::vector<double>>();
  w.vm.iterations = j.at("vm").at("iterations");
  w.lead.side = w.side;
  w.lead.theta = th;
  w.lead.u_p0 = field_from_json(j.at("lead").at("u_p0"), th, stretch);
  w.lead.layer = w.lead.u_p0.grid;
  w.lead.v_p1 = field_from_json(j.at("lead").at("v_p1"), th, stretch, w.lead.layer);
  w.lead.p_p1 = field_from_json(j.at("lead").at("p_p1"), th, stretch, w.lead.layer);
  w.lead.v_p1_wall = vector_from_json(j.at("lead").at("v_p1_wall"));
  w.lead.U_wall = w.U_wall;
  w.lead.kappa = w.kappa;
  for (const auto& oj : j.at("orders")) {
    BoundaryLayerOrder o;
    o.side = w.side;
    o.k = oj.at("k");
    o.A_inf = oj.at("A_inf");
    o.gamma_check = oj.at("gamma_check");
    o.u_pk = field_from_json(oj.at("u_pk"), th, stretch, w.lead.layer);
    o.v_pk1 = field_from_json(oj.at("v_pk1"), th, stretch, w.lead.layer);
    if (oj.contains("p_pk1")) o.p_pk1 = field_from_json(oj.at("p_pk1"), th, stretch, w.lead.layer);
    w.orders.push_back(std::move(o));
  }
  return w;
}

}  // namespace

void save_expansion(const Expansion& ex, const std::string& path) {
  json j;
  j["schema"] = "pbflow-expansion-1";
  j["bd"] = bd_to_json(ex.bd);
  j["prof"] = {{"a0", ex.prof.a0},   {"b0", ex.prof.b0}, {"a_t", ex.prof.a_t},
               {"b_t", ex.prof.b_t}, {"c_t", ex.prof.c_t}, {"delta", ex.prof.delta},
               {"r0", ex.prof.r0}};
  j["opt"] = {{"n_theta", ex.opt.n_theta},
              {"n_radial", ex.opt.n_radial},
              {"n_psi", ex.opt.n_psi},
              {"n_layer", ex.opt.n_layer},
              {"psi_depth", ex.opt.psi_depth},
              {"stretch", ex.opt.stretch},
              {"fp_tol", ex.opt.fp_tol},
              {"fp_max_iter", ex.opt.fp_max_iter},
              {"gamma", ex.opt.gamma},
              {"gamma_crosscheck", ex.opt.gamma_crosscheck},
              {"gamma_check_tol", ex.opt.gamma_check_tol},
              {"K", ex.opt.K}};
  j["outer"] = wall_to_json(ex.outer, ex.bd.r0);
  j["inner"] = wall_to_json(ex.inner, ex.bd.r0);
  json eu = json::array();
  for (const auto& e : ex.euler) {
    json ej;
    ej["k"] = e.k;
    ej["u"] = field_to_json(e.u, ex.bd.r0);
    ej["v"] = field_to_json(e.v, ex.bd.r0);
    ej["p"] = field_to_json(e.p, ex.bd.r0);
    ej["p_theta_gradient"] = e.p_theta_gradient;
    ej["A_blend_outer"] = e.A_blend_outer;
    ej["A_blend_inner"] = e.A_blend_inner;
    if (e.corrector.size() > 0) ej["corrector"] = vector_to_json(e.corrector);
    eu.push_back(std::move(ej));
  }
  j["euler"] = std::move(eu);
  if (ex.a1_corrector.size() > 0) j["a1_corrector"] = vector_to_json(ex.a1_corrector);
  j["diag"] = {{"solvability", ex.diag.solvability},
               {"g2_measured", ex.diag.g2_measured},
               {"g2_expected", ex.diag.g2_expected},
               {"forcing_far_fraction", ex.diag.forcing_far_fraction},
               {"linearized_residuals", ex.diag.linearized_residuals},
               {"pek_residuals", ex.diag.pek_residuals}};

  std::ofstream out(path);
  if (!out) throw ConfigError("save_expansion: cannot write " + path);
  out << j.dump() << "\n";
}

Expansion load_expansion(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_expansion: cannot open " + path);
  json j;
  in >> j;
  if (j.value("schema", "") != "pbflow-expansion-1")
    throw ConfigError("load_expansion: unknown schema in " + path);

  Expansion ex;
  ex.bd = bd_from_json(j.at("bd"));
  const auto& pj = j.at("prof");
  ex.prof.a0 = pj.at("a0");
  ex.prof.b0 = pj.at("b0");
  ex.prof.a_t = pj.at("a_t");
  ex.prof.b_t = pj.at("b_t");
  ex.prof.c_t = pj.at("c_t");
  ex.prof.delta = pj.at("delta");
  ex.prof.r0 = pj.at("r0");
  const auto& oj = j.at("opt");
  ex.opt.n_theta = oj.at("n_theta");
  ex.opt.n_radial = oj.at("n_radial");
  ex.opt.n_psi = oj.at("n_psi");
  ex.opt.n_layer = oj.at("n_layer");
  ex.opt.psi_depth = oj.at("psi_depth");
  ex.opt.stretch = oj.at("stretch");
  ex.opt.fp_tol = oj.at("fp_tol");
  ex.opt.fp_max_iter = oj.at("fp_max_iter");
  ex.opt.gamma = oj.at("gamma");
  ex.opt.gamma_crosscheck = oj.at("gamma_crosscheck");
  ex.opt.gamma_check_tol = oj.at("gamma_check_tol");
  ex.opt.K = oj.at("K");

  ex.theta = std::make_shared<const ThetaGrid>(ex.opt.n_theta);
  ex.radial = Grid1D::radial(ex.bd.r0, ex.opt.n_radial);
  ex.chi = CutoffChi(ex.bd.r0);
  ex.outer = wall_from_json(j.at("outer"), ex.theta, ex.opt.stretch);
  ex.inner = wall_from_json(j.at("inner"), ex.theta, ex.opt.stretch);
  for (const auto& ej : j.at("euler")) {
    EulerOrder e;
    e.k = ej.at("k");
    e.u = field_from_json(ej.at("u"), ex.theta, ex.opt.stretch, ex.radial);
    e.v = field_from_json(ej.at("v"), ex.theta, ex.opt.stretch, ex.radial);
    e.p = field_from_json(ej.at("p"), ex.theta, ex.opt.stretch, ex.radial);
    e.p_theta_gradient = ej.at("p_theta_gradient");
    e.A_blend_outer = ej.at("A_blend_outer");
    e.A_blend_inner = ej.at("A_blend_inner");
    if (ej.contains("corrector")) e.corrector = vector_from_json(ej.at("corrector"));
    ex.euler.push_back(std::move(e));
  }
  if (j.contains("a1_corrector")) ex.a1_corrector = vector_from_json(j.at("a1_corrector"));
  const auto& dj = j.at("diag");
  ex.diag.solvability = dj.at("solvability").get<std::vector<double>>();
  ex.diag.g2_measured = dj.at("g2_measured");
  ex.diag.g2_expected = dj.at("g2_expected");
  ex.diag.forcing_far_fraction = dj.at("forcing_far_fraction").get<std::vector<double>>();
  ex.diag.linearized_residuals = dj.at("linearized_residuals").get<std::vector<double>>();
  ex.diag.pek_residuals = dj.at("pek_residuals").get<std::vector<double>>();
  return ex;
}

void save_ns_state(const NSState& s, const std::string& path) {
  json j;
  j["schema"] = "pbflow-ns-state-1";
  j["epsilon"] = s.epsilon;
  j["n_theta"] = s.theta->size();
  j["r0"] = s.radial->node(0);
  j["n_radial"] = s.radial->size();
  j["u"] = matrix_to_json(s.u.v);
  j["v"] = matrix_to_json(s.v.v);
  j["p_int"] = matrix_to_json(s.p_int);
  j["G"] = s.G;
  j["lambda"] = s.lambda;
  std::ofstream out(path);
  if (!out) throw ConfigError("save_ns_state: cannot write " + path);
  out << j.dump() << "\n";
}

NSState load_ns_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_ns_state: cannot open " + path);
  json j;
  in >> j;
  if (j.value("schema", "") != "pbflow-ns-state-1")
    throw ConfigError("load_ns_state: unknown schema in " + path);
  NSState s;
  s.epsilon = j.at("epsilon");
  s.theta = std::make_shared<const ThetaGrid>(j.at("n_theta").get<int>());
  s.radial = Grid1D::radial(j.at("r0"), j.at("n_radial").get<int>());
  s.u = Field2D(s.theta, s.radial, matrix_from_json(j.at("u")));
  s.v = Field2D(s.theta, s.radial, matrix_from_json(j.at("v")));
  s.p_int = matrix_from_json(j.at("p_int"));
  s.G = j.at("G");
  s.lambda = j.at("lambda");
  return s;
}

std::uint64_t file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file_hash: cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

bool RunManifest::has_valid(const std::string& name, const std::string& dir) const {
  auto it = artifacts.find(name);
  auto ih = artifact_hashes.find(name);
  if (it == artifacts.end() || ih == artifact_hashes.end()) return false;
  const std::string full = dir + "/" + it->second;
  if (!std::filesystem::exists(full)) return false;
  return hash_hex(file_hash(full)) == ih->second;
}

void save_manifest(const RunManifest& m, const std::string& path) {
  json j;
  j["schema"] = "pbflow-manifest-1";
  j["config_hash"] = m.config_hash;
  j["artifacts"] = m.artifacts;
  j["artifact_hashes"] = m.artifact_hashes;
  j["timings_sec"] = m.timings_sec;
  j["version"] = m.version;
  std::ofstream out(path);
  if (!out) throw ConfigError("save_manifest: cannot write " + path);
  out << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::string& path) {
  RunManifest m;
  std::ifstream in(path);
  if (!in) return m;
  json j;
  in >> j;
  if (j.value("schema", "") != "pbflow-manifest-1") return m;
  m.config_hash = j.value("config_hash", "");
  if (j.contains("artifacts")) m.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
  if (j.contains("artifact_hashes"))
    m.artifact_hashes = j.at("artifact_hashes").get<std::map<std::string, std::string>>();
  if (j.contains("timings_sec"))
    m.timings_sec = j.at("timings_sec").get<std::map<std::string, double>>();
  m.version = j.value("version", "1");
  return m;
}

}  // namespace pbflow
