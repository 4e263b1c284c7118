// pbflow: staged pipeline for the annulus boundary-layer expansion, the
// steady Navier-Stokes solves and the vanishing-viscosity verification runs.
//
// Subcommands: prandtl | expand | solve | verify | pb-check | sweep.
// Outputs land in the configured directory: JSON artifacts, a cache manifest,
// CSV tables, a JSON summary and optional SVG charts.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <atomic>
#include <future>
#include <thread>
#include <iostream>

#include <CLI11.hpp>

#include "pbflow/criteria.hpp"
#include "pbflow/svg.hpp"

using namespace pbflow;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  double eps_override = 0.0;
  int jobs_override = 0;
  bool plots = false;
};

RunConfig load(const CommonArgs& a) {
  RunConfig cfg = load_config(a.config_path);
  if (!a.out_override.empty()) cfg.output_dir = a.out_override;
  if (a.eps_override > 0.0) cfg.epsilon = a.eps_override;
  if (a.jobs_override > 0) cfg.jobs = a.jobs_override;
  if (a.plots) cfg.plots = true;
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double now_sec() {
  using clk = std::chrono::steady_clock;
  return std::chrono::duration<double>(clk::now().time_since_epoch()).count();
}

std::string expansion_artifact_name(const RunConfig& cfg) {
  return "expansion-" + hash_hex(expansion_hash(cfg)) + ".json";
}

// Build or load the cached epsilon-independent expansion.
Expansion get_expansion(const RunConfig& cfg, bool* cache_hit = nullptr) {
  const std::string mpath = cfg.output_dir + "/manifest.json";
  RunManifest m = load_manifest(mpath);
  const std::string name = expansion_artifact_name(cfg);
  if (m.has_valid(name, cfg.output_dir)) {
    if (cache_hit) *cache_hit = true;
    return load_expansion(cfg.output_dir + "/" + m.artifacts.at(name));
  }
  if (cache_hit) *cache_hit = false;
  const double t0 = now_sec();
  Expansion ex = build_expansion(cfg.boundary, cfg.profile(), cfg.expansion);
  const std::string path = cfg.output_dir + "/" + name;
  save_expansion(ex, path);
  m.config_hash = hash_hex(config_hash(cfg));
  m.artifacts[name] = name;
  m.artifact_hashes[name] = hash_hex(file_hash(path));
  m.timings_sec["prandtl"] = now_sec() - t0;
  save_manifest(m, mpath);
  return ex;
}

int cmd_prandtl(const CommonArgs& args) {
  RunConfig cfg = load(args);
  bool hit = false;
  Expansion ex = get_expansion(cfg, &hit);
  std::printf("%s expansion %s (K=%d)\n", hit ? "cached" : "built",
              expansion_artifact_name(cfg).c_str(), ex.opt.K);
  std::printf("wall speeds: outer %s inner %s\n", g17(wall_speeds(cfg.boundary).outer).c_str(),
              g17(wall_speeds(cfg.boundary).inner).c_str());
  for (std::size_t i = 0; i < ex.diag.solvability.size(); ++i)
    std::printf("solvability[%zu] = %.3e\n", i, ex.diag.solvability[i]);
  if (ex.opt.K >= 2)
    std::printf("order-2 pressure gradient: measured %s expected %s\n",
                g17(ex.diag.g2_measured).c_str(), g17(ex.diag.g2_expected).c_str());
  return 0;
}

int cmd_expand(const CommonArgs& args, int K_override) {
  RunConfig cfg = load(args);
  Expansion ex = get_expansion(cfg);
  const int K = (K_override >= 0) ? K_override : std::min(cfg.expansion.K, 1);
  CompositeSolution comp = assemble(ex, K, cfg.epsilon);
  ResidualReport rep = residual(comp);
  std::printf("composite K=%d eps=%s\n", K, g17(cfg.epsilon).c_str());
  std::printf("  |R_u|_2 = %.6e  |R_u|_inf = %.6e\n", rep.ru_l2, rep.ru_max);
  std::printf("  |R_v|_2 = %.6e  |R_v|_inf = %.6e\n", rep.rv_l2, rep.rv_max);
  std::printf("  |d_theta R_u|_2 = %.6e  |d_theta R_v|_2 = %.6e\n", rep.dtheta_ru_l2,
              rep.dtheta_rv_l2);
  std::printf("  divergence (ingredient) = %.3e, wall trace error = %.3e, min u = %.6f\n",
              norm_max(comp.div_ingredient), comp.wall_trace_error, comp.min_u);
  return 0;
}

int cmd_solve(const CommonArgs& args) {
  RunConfig cfg = load(args);
  Expansion ex = get_expansion(cfg);
  const double eps = cfg.epsilon;
  auto radial = Grid1D::radial(cfg.boundary.r0, ns_radial_points(eps));
  CompositeSolution comp = assemble(ex, std::min(cfg.expansion.K, 1), eps, radial);
  const ShearProfile prof = cfg.profile();
  NSState seed = seed_from_composite(comp, 2.0 * prof.cc() * eps * eps);
  NSOptions opts = cfg.ns;
  opts.line_search = true;
  auto [state, rep] = newton_solve(cfg.boundary, seed, opts);

  char name[128];
  std::snprintf(name, sizeof(name), "state-%s-eps%s.json",
                hash_hex(config_hash(cfg)).substr(0, 8).c_str(), g17(eps).c_str());
  const std::string path = cfg.output_dir + "/" + name;
  save_ns_state(state, path);
  std::printf("solved eps=%s in %d newton iterations, final residual %.3e\n", g17(eps).c_str(),
              rep.iterations, rep.final_residual);
  std::printf("state written to %s\n", path.c_str());
  const TheoremError te = theorem_error(state, ex);
  std::printf("sup|u - leading order| = %.6e, sup|v| = %.6e\n", te.sup_tangential, te.sup_normal);
  return 0;
}

void write_sweep_csv(const RunConfig& cfg, const CriteriaReport& rep) {
  std::ofstream csv(cfg.output_dir + "/verify_sweep.csv");
  csv << "epsilon,delta,sup_tangential,sup_normal,vorticity_error,interior_vorticity,"
         "pb_variation,newton_iterations,newton_residual,seed_residual,warm_start,converged\n";
  for (const auto& p : rep.eps_sweep.points) {
    csv << g17(p.epsilon) << ',' << g17(p.delta) << ',' << g17(p.sup_tangential) << ','
        << g17(p.sup_normal) << ',' << g17(p.vorticity_error) << ','
        << g17(p.interior_vorticity) << ',' << g17(p.pb_variation) << ','
        << p.newton_iterations << ',' << g17(p.newton_residual) << ',' << g17(p.seed_residual)
        << ',' << (p.warm_start ? 1 : 0) << ',' << (p.converged ? 1 : 0) << '\n';
  }
}

void write_family_csv(const RunConfig& cfg, const CriteriaReport& rep) {
  std::ofstream csv(cfg.output_dir + "/verify_family.csv");
  csv << "delta,epsilon,interior_vorticity,vorticity_error,newton_iterations,converged\n";
  for (const auto& p : rep.family.points)
    csv << g17(p.delta) << ',' << g17(p.epsilon) << ',' << g17(p.interior_vorticity) << ','
        << g17(p.vorticity_error) << ',' << p.newton_iterations << ',' << (p.converged ? 1 : 0)
        << '\n';
}

void write_summary_json(const RunConfig& cfg, const CriteriaReport& rep) {
  std::ofstream js(cfg.output_dir + "/verify_summary.json");
  js << "{\n  \"schema\": \"pbflow-verify-summary-1\",\n";
  js << "  \"config_hash\": \"" << hash_hex(config_hash(cfg)) << "\",\n";
  js << "  \"tangential_slope\": " << g17(rep.eps_sweep.tangential_fit.slope) << ",\n";
  js << "  \"tangential_constant\": " << g17(rep.eps_sweep.tangential_fit.log_constant) << ",\n";
  js << "  \"v_over_eps_min\": " << g17(rep.eps_sweep.v_over_eps_min) << ",\n";
  js << "  \"v_over_eps_max\": " << g17(rep.eps_sweep.v_over_eps_max) << ",\n";
  js << "  \"family_max_mismatch\": " << g17(rep.family.max_relative_mismatch) << ",\n";
  js << "  \"criteria\": [\n";
  for (std::size_t i = 0; i < rep.results.size(); ++i) {
    const auto& c = rep.results[i];
    js << "    {\"id\": " << c.id << ", \"name\": \"" << c.name << "\", \"pass\": "
       << (c.pass ? "true" : "false") << ", \"detail\": \"" << c.detail << "\"}"
       << (i + 1 < rep.results.size() ? ",\n" : "\n");
  }
  js << "  ]\n}\n";
}

void write_plots(const RunConfig& cfg, const CriteriaReport& rep) {
  {
    SvgSeries s1{"sup|u - leading|", {}, {}};
    SvgSeries s2{"sup|v|", {}, {}};
    for (const auto& p : rep.eps_sweep.points) {
      s1.x.push_back(p.epsilon);
      s1.y.push_back(std::max(p.sup_tangential, 1e-300));
      s2.x.push_back(p.epsilon);
      s2.y.push_back(std::max(p.sup_normal, 1e-300));
    }
    SvgChartOptions o;
    o.title = "leading-order error vs viscosity parameter";
    o.x_label = "epsilon";
    o.y_label = "sup error";
    o.log_x = o.log_y = true;
    write_svg_chart(cfg.output_dir + "/verify_theorem_error.svg", {s1, s2}, o);
  }
  if (!rep.composite_ru_k1.empty()) {
    std::vector<SvgSeries> series;
    SvgSeries k1{"K=1", rep.composite_eps, rep.composite_ru_k1};
    series.push_back(k1);
    if (!rep.composite_ru_k3.empty())
      series.push_back(SvgSeries{"K=3", rep.composite_eps, rep.composite_ru_k3});
    SvgChartOptions o;
    o.title = "composite residual |R_u|_2 vs epsilon";
    o.x_label = "epsilon";
    o.y_label = "|R_u|_2";
    o.log_x = o.log_y = true;
    write_svg_chart(cfg.output_dir + "/verify_composite_residual.svg", series, o);
  }
}

int cmd_verify(const CommonArgs& args) {
  RunConfig cfg = load(args);
  CriteriaReport rep = run_criteria(cfg);
  write_sweep_csv(cfg, rep);
  write_family_csv(cfg, rep);
  write_summary_json(cfg, rep);
  if (cfg.plots) write_plots(cfg, rep);
  for (const auto& c : rep.results)
    std::printf("[%s] criterion %2d: %s -- %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.detail.c_str());
  if (rep.all_pass()) {
    std::printf("all %zu criteria passed\n", rep.results.size());
    return 0;
  }
  std::printf("criterion miss\n");
  return 3;
}

int cmd_pb_check(const CommonArgs& args) {
  RunConfig cfg = load(args);
  auto rad = Grid1D::radial(cfg.boundary.r0, 64);
  Vector w_law(rad->size()), w_bad(rad->size()), ue(rad->size());
  const ShearProfile prof = cfg.profile();
  for (int j = 0; j < rad->size(); ++j) {
    const double r = rad->node(j);
    w_law[j] = prof.vorticity(r);
    w_bad[j] = r * r;
    ue[j] = prof.u(r);
  }
  std::printf("2 pi r w'(r) relative variation:\n");
  std::printf("  family vorticity law (2 delta c~ ln r + const): %.3e\n",
              pb_diagnostic(w_law, ue, *rad));
  std::printf("  w = r^2 (violates the law):                     %.3e\n",
              pb_diagnostic(w_bad, ue, *rad));

  // a solved state, when present in the cache, gets the same diagnostic
  Expansion ex = get_expansion(cfg);
  const double eps = cfg.epsilon;
  auto radial = Grid1D::radial(cfg.boundary.r0, ns_radial_points(eps));
  CompositeSolution comp = assemble(ex, std::min(cfg.expansion.K, 1), eps, radial);
  NSOptions opts = cfg.ns;
  opts.line_search = true;
  auto [state, nrep] = newton_solve(cfg.boundary, seed_from_composite(comp, 2.0 * prof.cc() * eps * eps), opts);
  const Vector w0 = mean_theta(vorticity(state));
  Vector ue2(radial->size());
  for (int j = 0; j < radial->size(); ++j) ue2[j] = prof.u(radial->node(j));
  std::printf("  converged state at eps=%s:                      %.3e\n", g17(eps).c_str(),
              pb_diagnostic(w0, ue2, *radial));
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  RunConfig cfg = load(args);
  // (eps x delta) grid of solves; delta rows are independent and run on the
  // bounded worker pool, each row walks its eps list by continuation
  struct Row {
    double delta;
    std::vector<SweepPoint> pts;
  };
  std::vector<Row> rows(cfg.sweep_deltas.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cfg.sweep_deltas.size()) return;
      const double d = cfg.sweep_deltas[k];
      BoundaryData bd = cfg.boundary;
      ShearProfile prof = make_shear_profile(bd, d, cfg.c_tilde);
      ExpansionOptions eopt = cfg.expansion;
      eopt.K = std::min(cfg.expansion.K, 1);
      Expansion ex = build_expansion(bd, prof, eopt);
      NSOptions nopt = cfg.ns;
      nopt.line_search = true;
      SweepReport rep = epsilon_sweep(cfg.sweep_epsilons, ex, eopt.K, nopt);
      rows[k].delta = d;
      rows[k].pts = rep.points;
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(cfg.sweep_deltas.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::ofstream csv(cfg.output_dir + "/sweep.csv");
  csv << "delta,epsilon,sup_tangential,sup_normal,vorticity_error,interior_vorticity,"
         "newton_iterations,converged\n";
  for (const auto& row : rows)
    for (const auto& p : row.pts)
      csv << g17(row.delta) << ',' << g17(p.epsilon) << ',' << g17(p.sup_tangential) << ','
          << g17(p.sup_normal) << ',' << g17(p.vorticity_error) << ','
          << g17(p.interior_vorticity) << ',' << p.newton_iterations << ','
          << (p.converged ? 1 : 0) << '\n';
  std::printf("sweep written to %s/sweep.csv (%zu delta rows x %zu eps points)\n",
              cfg.output_dir.c_str(), cfg.sweep_deltas.size(), cfg.sweep_epsilons.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matched-asymptotic boundary layers and steady Navier-Stokes on an annulus"};
  app.require_subcommand(1);

  CommonArgs args;
  int expand_K = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON run configuration")->required();
    sub->add_option("--out", args.out_override, "output directory override");
    sub->add_option("--jobs", args.jobs_override, "worker pool size for sweeps");
    sub->add_flag("--plots", args.plots, "emit SVG line charts");
  };

  CLI::App* prandtl = app.add_subcommand("prandtl", "build and cache the layer expansion");
  add_common(prandtl);
  CLI::App* expand = app.add_subcommand("expand", "assemble the composite and report residuals");
  add_common(expand);
  expand->add_option("--eps", args.eps_override, "viscosity parameter override");
  expand->add_option("-K,--order", expand_K, "composite order override");
  CLI::App* solve = app.add_subcommand("solve", "steady Navier-Stokes solve at one viscosity");
  add_common(solve);
  solve->add_option("--eps", args.eps_override, "viscosity parameter override");
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance criteria and reports");
  add_common(verify);
  CLI::App* pbcheck = app.add_subcommand("pb-check", "generalized vorticity-law diagnostics");
  add_common(pbcheck);
  CLI::App* sweep = app.add_subcommand("sweep", "solve over the (eps, delta) grid");
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (prandtl->parsed()) return cmd_prandtl(args);
    if (expand->parsed()) return cmd_expand(args, expand_K);
    if (solve->parsed()) return cmd_solve(args);
    if (verify->parsed()) return cmd_verify(args);
    if (pbcheck->parsed()) return cmd_pb_check(args);
    if (sweep->parsed()) return cmd_sweep(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
