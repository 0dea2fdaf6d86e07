#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "nsf/errors.hpp"
#include "nsf/io.hpp"

using namespace nsf;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "INI run configuration")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory (overrides the config and NSFLAB_OUTPUT_ROOT)");
  sub->add_option("--seed", c.seed, "seed for sampled checks (overrides run.seed)");
  sub->add_option("--jobs", c.jobs, "worker threads for independent runs")->check(CLI::PositiveNumber);
}

struct Session {
  RunConfig cfg;
  bool has_config = false;
  std::string dir;

  std::string path(const std::string& name) const { return (std::filesystem::path(dir) / name).string(); }
};

Session open_session(const Common& c, const std::string& command) {
  Session s;
  if (!c.config.empty()) {
    s.cfg = load_config(c.config);
    s.has_config = true;
  }
  if (c.seed) s.cfg.seed = *c.seed;
  s.dir = resolve_output_dir(s.cfg, command, c.out);
  save_config(s.path("config.echo.ini"), s.cfg);
  return s;
}

int verdict(const Session& s, json report, bool pass, const std::vector<std::string>& failures) {
  report["pass"] = pass;
  report["failures"] = failures;
  write_json(s.path("report.json"), report);
  for (const auto& f : failures) std::fprintf(stderr, "FAIL: %s\n", f.c_str());
  std::printf("%s (%s)\n", pass ? "PASS" : "FAIL", s.path("report.json").c_str());
  return pass ? 0 : 1;
}

Models config_models(const RunConfig& c) { return {make_thermo(c.model), make_transport(c.transport)}; }

int cmd_simulate(const Common& c) {
  const Session s = open_session(c, "simulate");
  const Models md = config_models(s.cfg);
  const Grid g = make_grid(s.cfg.grid);
  const auto& ex = s.cfg.experiment;
  FieldSet init;
  BoundaryData bd;
  ForcingFn forcing;
  if (ex.initial == "strong") {
    const StrongSolution sol = manufactured(ex.profile, g.dim, md.thermo, md.transport);
    init = sample_strong(sol, g, 0.0);
    bd = sol.boundary();
    if (sol.forced) forcing = forcing_of(sol, md);
  } else {
    bd = make_boundary(s.cfg.boundary);
    init = decay_initial(g, ex.rho0, 1.0, ex.amp_u, ex.amp_theta);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) init.theta.at(i, j) *= bd.theta_B(0.0, g.xc(i), g.yc(j));
  }
  if (ex.perturbation != 0.0) perturb(init, ex.perturbation);
  sync_ghosts(init, bd, 0.0);
  const Trajectory tr = simulate(init, make_solver_config(s.cfg.solver), md, bd, forcing);
  write_series(s.path("series.csv"), tr);
  write_snapshot(s.path("snapshot_initial.bin"), tr.frames.front());
  write_snapshot(s.path("snapshot_final.bin"), tr.frames.back());
  const FieldSet& last = tr.frames.back();
  const bool finite = last.rho.all_finite() && last.theta.all_finite();
  std::vector<std::string> failures;
  if (!finite) failures.push_back("non-finite final state");
  json r{{"steps", tr.steps},
         {"rejections", tr.rejections},
         {"frames", tr.frames.size()},
         {"t_final", last.t},
         {"min_rho", last.rho.min_interior()},
         {"min_theta", last.theta.min_interior()}};
  return verdict(s, r, finite, failures);
}

int cmd_mv_check(const Common& c) {
  const Session s = open_session(c, "mv-check");
  const auto& grids = s.cfg.experiment.grids;
  if (grids.size() < 2) throw ConfigError("'experiment.grids' needs at least two levels");
  const CompatStudy cs = compat_study(s.cfg.grid.dim, {grids[0], grids[1]});
  const InequalityStudy is = inequality_study(grids);
  CsvTable t;
  t.header = {"n", "h", "continuity", "momentum", "velocity", "temperature"};
  for (const auto& l : cs.levels) t.rows.push_back({double(l.n), l.h, l.continuity, l.momentum, l.velocity, l.temperature});
  write_csv(s.path("compat.csv"), t);
  for (const std::string run : {"conduction", "decay"}) {
    CsvTable u;
    u.header = {"n", "h", "entropy_slack", "ballistic_slack"};
    for (const auto& l : is.levels)
      if (l.run == run) u.rows.push_back({double(l.n), l.h, l.entropy_slack, l.ballistic_slack});
    write_csv(s.path("inequality_" + run + ".csv"), u);
  }
  std::vector<std::string> failures = cs.failures;
  failures.insert(failures.end(), is.failures.begin(), is.failures.end());
  return verdict(s, {{"compat", to_json(cs)}, {"inequalities", to_json(is)}}, cs.ok && is.ok, failures);
}

int cmd_relenergy(const Common& c) {
  const Session s = open_session(c, "relenergy");
  const Models md = config_models(s.cfg);
  const int dim = s.cfg.grid.dim;
  const auto& ex = s.cfg.experiment;
  std::vector<std::string> failures;

  const BregmanReport br = bregman_equivalence_check(md.thermo, 1000, s.cfg.seed, dim);
  if (!(br.max_rel_gap <= 1e-9)) failures.push_back("Bregman forms disagree: " + format_double(br.max_rel_gap));
  if (!(br.min_value >= 0.0)) failures.push_back("negative Bregman value " + format_double(br.min_value));

  StrongState st;
  st.u = Vec::Constant(dim, 0.1);
  const CoercivityReport co = coercivity_check(md.thermo, CutoffParams{0.1}, st, ex.samples * 10, s.cfg.seed);
  if (!(co.c_found > 0.0) || co.violations != 0) failures.push_back("coercivity fails at " + co.witness);

  const StrongSolution sol = manufactured(ex.profile, dim, md.thermo, md.transport);
  const Grid g = make_grid(s.cfg.grid);
  const R2Smallness r2 = r2_smallness(md, sol, g, 0.5 * s.cfg.solver.t_end, ex.r2_eps);
  if (!(r2.slope >= 1.9 && r2.slope <= 2.1)) failures.push_back("R2 slope " + format_double(r2.slope));

  // Inequality chain on a perturbed run against the strong solution; reported, not asserted.
  FieldSet init = sample_strong(sol, g, 0.0);
  const BoundaryData bd = sol.boundary();
  perturb(init, ex.eps.empty() ? 1e-2 : ex.eps.front());
  sync_ghosts(init, bd, 0.0);
  const Trajectory tr = simulate(init, make_solver_config(s.cfg.solver), md, bd,
                                 sol.forced ? forcing_of(sol, md) : ForcingFn{});
  const AtomicYoungMeasure V = dirac_from_trajectory(tr);
  const MVProblem P = prepare(V, md, tr.forcing);
  const RelEnergyReport rr = rel_energy_inequality_report(P, sol);
  CsvTable t;
  t.header = {"t", "E", "lhs", "rhs", "slack"};
  for (const auto& l : rr.levels) t.rows.push_back({l.t, l.E, l.lhs, l.rhs, l.slack});
  write_csv(s.path("relative_energy.csv"), t);
  CsvTable r2t;
  r2t.header = {"eps", "integral"};
  for (size_t k = 0; k < r2.eps.size(); ++k) r2t.rows.push_back({r2.eps[k], r2.integral[k]});
  write_csv(s.path("r2.csv"), r2t);

  json r{{"bregman", {{"max_rel_gap", br.max_rel_gap}, {"min_value", br.min_value}, {"samples", br.samples}}},
         {"coercivity",
          {{"c", co.c_found}, {"violations", co.violations}, {"samples", co.samples}, {"witness", co.witness}}},
         {"r2", to_json(r2)},
         {"inequality", to_json(rr)}};
  return verdict(s, r, failures.empty(), failures);
}

int cmd_wsu(const Common& c, int theorem, const std::vector<double>& eps, const std::vector<int>& grids) {
  const Session s = open_session(c, "wsu");
  ExperimentSpec spec = default_experiment(theorem);
  if (s.has_config) {
    spec.thermo = s.cfg.model;
    spec.transport = s.cfg.transport;
  }
  if (!eps.empty()) spec.eps = eps;
  if (!grids.empty()) {
    spec.collapse_grids = grids;
    spec.gronwall_grids.assign(grids.begin(), grids.begin() + std::min<size_t>(2, grids.size()));
  }
  spec.jobs = c.jobs;
  const GateVerdict gate = theorem_gate(theorem, spec.thermo, spec.transport);
  if (!gate.accepted) {
    std::fprintf(stderr, "gate rejected theorem %d: %s\n", theorem, gate.reason.c_str());
    return verdict(s, {{"theorem", theorem}, {"gate", {{"accepted", false}, {"reason", gate.reason}}}}, false,
                   {"gate: " + gate.reason});
  }
  const TheoremReport R = run_theorem(spec);
  CsvTable col;
  col.header = {"n", "h", "E0", "max_E", "order"};
  for (const auto& l : R.collapse) col.rows.push_back({double(l.n), l.h, l.E0, l.max_E, l.order});
  write_csv(s.path("collapse.csv"), col);
  CsvTable gr;
  gr.header = {"sign", "eps", "n", "E0", "E_end", "C", "max_ratio"};
  for (const auto& g : R.gronwall) {
    const double sign = g.kind == "plus" ? 1.0 : g.kind == "minus" ? -1.0 : 0.0;
    gr.rows.push_back({sign, g.eps, double(g.n), g.E0, g.E_end, g.fit.C, g.fit.max_ratio});
  }
  write_csv(s.path("gronwall.csv"), gr);
  return verdict(s, to_json(R), R.pass, R.failures);
}

int cmd_apriori(const Common& c, const std::vector<int>& grids) {
  const Session s = open_session(c, "apriori");
  AprioriSpec spec = AprioriSpec::defaults();
  if (s.has_config) {
    spec.thermo = s.cfg.model;
    spec.transport = s.cfg.transport;
  }
  if (!grids.empty()) spec.grids = grids;
  const AprioriReport R = run_apriori(spec);
  CsvTable t;
  t.header = {"n", "h"};
  for (const char* name : kAprioriTermNames) t.header.push_back(name);
  auto row = [](const AprioriLevel& L) {
    std::vector<double> r{double(L.n), L.h};
    r.insert(r.end(), L.terms.begin(), L.terms.end());
    return r;
  };
  t.rows.push_back(row(R.calibration));
  for (const auto& L : R.levels) t.rows.push_back(row(L));
  write_csv(s.path("apriori_terms.csv"), t);
  return verdict(s, to_json(R), R.pass, R.failures);
}

int cmd_defect_study(const Common& c) {
  const Session s = open_session(c, "defect-study");
  DefectStudySpec spec;
  if (s.has_config) spec.thermo = s.cfg.model;
  const DefectStudyReport R = run_defect_study(spec);
  CsvTable t;
  t.header = {"fine_n", "kinetic", "internal", "entropy", "D_const", "D_sine", "D_two_mode"};
  for (const auto& L : R.oscillatory.levels)
    t.rows.push_back({double(L.fine_n), L.kinetic, L.internal, L.entropy, L.D[0], L.D[1], L.D[2]});
  write_csv(s.path("defects.csv"), t);
  return verdict(s, to_json(R), R.pass, R.failures);
}

int cmd_verify_thermo(const Common& c) {
  const Session s = open_session(c, "verify-thermo");
  const ThermoModel m = make_thermo(s.cfg.model);
  const long n = s.cfg.experiment.samples;
  std::vector<std::string> failures;
  const GibbsSuiteReport gs = gibbs_suite(m, n, s.cfg.seed);
  if (!(gs.max_r_rho <= 1e-8 && gs.max_r_theta <= 1e-8))
    failures.push_back("Gibbs residual " + format_double(std::max(gs.max_r_rho, gs.max_r_theta)));
  const StructureReport st = validate_structure(m, n, s.cfg.seed);
  if (!st.pass) failures.push_back("structure: " + st.first_violation);
  const BregmanReport br = bregman_equivalence_check(m, 1000, s.cfg.seed, s.cfg.grid.dim);
  if (!(br.max_rel_gap <= 1e-9)) failures.push_back("Bregman forms disagree: " + format_double(br.max_rel_gap));
  if (!(br.min_value >= 0.0)) failures.push_back("negative Bregman value " + format_double(br.min_value));
  json r{{"model", to_string(m.kind)},
         {"gibbs", to_json(gs)},
         {"structure", to_json(st)},
         {"bregman", {{"max_rel_gap", br.max_rel_gap}, {"min_value", br.min_value}, {"samples", br.samples}}}};
  return verdict(s, r, failures.empty(), failures);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsflab: measure-valued Navier-Stokes-Fourier experiments"};
  app.require_subcommand(0, 1);
  Common common;
  int theorem = 0;
  std::vector<double> eps;
  std::vector<int> grids;

  std::map<std::string, CLI::App*> subs;
  for (const auto& e : experiment_registry()) {
    CLI::App* sub = app.add_subcommand(e.name, e.summary);
    add_common(sub, common);
    subs[e.name] = sub;
  }
  subs["wsu"]->add_option("--theorem", theorem, "theorem id (1, 2 or 3)")->required()->check(CLI::Range(1, 3));
  subs["wsu"]->add_option("--eps", eps, "perturbation sizes")->delimiter(',');
  subs["wsu"]->add_option("--grids", grids, "grid sizes, coarse to fine")->delimiter(',');
  subs["apriori"]->add_option("--grids", grids, "refinement levels")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "simulate") return cmd_simulate(common);
    if (name == "mv-check") return cmd_mv_check(common);
    if (name == "relenergy") return cmd_relenergy(common);
    if (name == "wsu") return cmd_wsu(common, theorem, eps, grids);
    if (name == "apriori") return cmd_apriori(common, grids);
    if (name == "defect-study") return cmd_defect_study(common);
    if (name == "verify-thermo") return cmd_verify_thermo(common);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const GateError& e) {
    std::fprintf(stderr, "gate rejected: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
