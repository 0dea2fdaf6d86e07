#include "nsf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
void parallel_for(int n, int jobs, F&& body) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](int k) {
    try {
      body(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const int workers = std::clamp(jobs, 1, std::max(n, 1));
  if (workers == 1) {
    for (int k = 0; k < n; ++k) run(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int k = next++; k < n; k = next++) run(k);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Grid make_grid(int dim, int n) { return dim == 1 ? Grid::line(n) : Grid::rect(n, n); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

TransportSpec uniqueness(TransportSpec t) {
  t.uniqueness_mode = true;
  return t;
}

Models build_models(const ExperimentSpec& spec) {
  return {make_thermo(spec.thermo), make_transport(uniqueness(spec.transport))};
}

Trajectory run_strong_start(const StrongSolution& s, const Models& md, const Grid& g, double t_end, int frames,
                            double cfl, double eps) {
  FieldSet init = sample_strong(s, g, 0.0);
  const BoundaryData bd = s.boundary();
  if (eps != 0.0) {
    perturb(init, eps);
    sync_ghosts(init, bd, 0.0);
  }
  SolverConfig cfg;
  cfg.cfl = cfl;
  cfg.t_end = t_end;
  cfg.snapshot_dt = t_end / frames;
  return simulate(init, cfg, md, bd, s.forced ? forcing_of(s, md) : ForcingFn{});
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

struct AtomRange {
  double rho_min = std::numeric_limits<double>::infinity(), rho_max = 0;
  double theta_min = std::numeric_limits<double>::infinity(), theta_max = 0;
  double s_abs_max = 0;
  double theta_cv_over_rho = 0;
  bool finite = true;
  void add(const AtomicYoungMeasure& V, const ThermoModel& m) {
    const Grid& g = V.grid();
    for (int l = 0; l < V.levels(); ++l)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          for (const auto& wa : V.cell(l, i, j)) {
            const PhaseAtom& a = wa.a;
            if (!std::isfinite(a.rho) || !std::isfinite(a.theta) || !a.u.allFinite()) {
              finite = false;
              continue;
            }
            rho_min = std::min(rho_min, a.rho);
            rho_max = std::max(rho_max, a.rho);
            theta_min = std::min(theta_min, a.theta);
            theta_max = std::max(theta_max, a.theta);
            if (m.kind == EosKind::PerfectGas && a.rho > 0 && a.theta > 0) {
              s_abs_max = std::max(s_abs_max, std::abs(eval(m, {a.rho, a.theta}).s));
              theta_cv_over_rho = std::max(theta_cv_over_rho, std::pow(a.theta, m.c_v) / a.rho);
            }
          }
  }
};

// rho s_R |u| <= C (theta |u - U| + rho s_R) <= C (theta^2 / (4 eps) + eps |u - U|^2 + rho s_R), C = max(2a, |U|).
long e1_violations(double a, double U_sup, long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lg(std::log(1e-4), std::log(1e4)), uu(-10.0, 10.0), ue(-2.0, 2.0);
  const double C = std::max(2.0 * a, U_sup);
  long bad = 0;
  for (long k = 0; k < samples; ++k) {
    const double rho = std::exp(lg(rng)), th = std::exp(lg(rng));
    const double u = uu(rng), U = std::clamp(ue(rng), -U_sup, U_sup), eps = std::exp(ue(rng));
    const double sR = 2.0 * a * th / rho;
    const double lhs = rho * sR * std::abs(u);
    const double mid = C * (th * std::abs(u - U) + rho * sR);
    const double rhs = C * (th * th / (4.0 * eps) + eps * (u - U) * (u - U) + rho * sR);
    const double tol = 1e-12 * std::max({1.0, lhs, rhs});
    if (lhs > mid + tol || mid > rhs + tol) ++bad;
  }
  return bad;
}

// sup of rho |s_M|^2 / (1 + rho + rho e_M) over a log-uniform box.
double e2_constant(const ThermoModel& m, double lo, double hi, int per_axis) {
  double c = 0;
  const double a = std::log(lo), b = std::log(hi);
  ThermoModel molecular = m;
  molecular.a = 0.0;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j) {
      const double rho = std::exp(a + (b - a) * i / (per_axis - 1));
      const double th = std::exp(a + (b - a) * j / (per_axis - 1));
      const ThermoEval v = eval(molecular, {rho, th});
      c = std::max(c, rho * v.s * v.s / (1.0 + rho + rho * v.e));
    }
  return c;
}

// Largest ratio int |u|^2 / int |D0(D_u)|^2 over discrete sine modes on g.
double korn_poincare_constant(const Grid& g, const Models& md, int modes) {
  double worst = 0;
  for (int k = 1; k <= modes; ++k)
    for (int l = 1; l <= modes; ++l) {
      FieldSet f(g);
      const VectorTest mode = sine_mode(g, k, l);
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          f.rho.at(i, j) = 1.0;
          f.theta.at(i, j) = 1.0;
          f.u.set(i, j, mode.v(0.0, g.xc(i), g.yc(j)));
        }
      sync_ghosts(f, BoundaryData::constant(1.0), 0.0);
      AtomicYoungMeasure V = dirac_from_frames({f});
      MVProblem P = prepare(V, md);
      const KornPoincareReport r = korn_poincare_check(P, sine_mode(g, 1, 1, 0.0), 1.0);
      worst = std::max(worst, r.ratio);
    }
  return worst;
}

double relative_spread(const std::vector<double>& C) {
  if (C.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(C.begin(), C.end());
  double mean = 0;
  for (double c : C) mean += c;
  mean /= static_cast<double>(C.size());
  return std::abs(mean) > 0 ? (*hi - *lo) / std::abs(mean) : 0.0;
}

}  // namespace

GateVerdict theorem_gate(int theorem, const ThermoSpec& thermo, const TransportSpec& transport) {
  if (theorem < 1 || theorem > 3) return {false, "unknown theorem id " + std::to_string(theorem)};
  try {
    make_thermo(thermo);
    make_transport(uniqueness(transport));
  } catch (const GateError& e) {
    return {false, e.what()};
  }
  if (transport.kind == "bounded_general")
    return {false, "bounded_general is an envelope without a concrete law; uniqueness runs need explicit coefficients"};
  const bool pg = thermo.kind == "perfect_gas";
  if (!pg && thermo.kernel == "zero" && thermo.a == 0.0)
    return {false, "zero molecular kernel with a = 0 has p = 0; thermodynamic stability dp/drho > 0 fails"};
  if (!pg && thermo.kernel == "zero" && theorem == 1)
    return {false, "zero molecular kernel gives dp/drho = 0; thermodynamic stability fails"};
  if (theorem == 2) {
    if (!pg) return {false, "theorem 2 requires Boyle's law p = rho theta (perfect_gas) with c_v > 1"};
    if (transport.kind != "affine_theta")
      return {false, "theorem 2 runs use affine_theta transport mu, lambda, kappa proportional to 1 + theta"};
  }
  if (theorem == 3) {
    if (pg) return {false, "theorem 3 requires molecular_radiation with p = theta^{5/2} P(rho/theta^{3/2}) + a theta^2"};
    if (thermo.kernel == "zero") return {false, "theorem 3 requires P'(q) > 0; the zero kernel violates it"};
    if (thermo.kernel == "linear")
      return {false, "theorem 3 requires the third law S(q) -> 0 as q -> infinity; the linear kernel has S = -log q"};
    if (!(thermo.a > 0.0)) return {false, "theorem 3 requires radiation coefficient a > 0"};
  }
  return {true, ""};
}

std::vector<GateCase> gate_matrix() {
  std::vector<ThermoSpec> thermos;
  for (double cv : {1.5, 1.0, 0.5}) {
    ThermoSpec t;
    t.kind = "perfect_gas";
    t.c_v = cv;
    thermos.push_back(t);
  }
  for (const char* kernel : {"zero", "linear", "log_tail"})
    for (const char* rad : {"quadratic", "stefan_boltzmann"})
      for (double a : {0.0, 0.1}) {
        ThermoSpec t;
        t.kind = "molecular_radiation";
        t.kernel = kernel;
        t.radiation = rad;
        t.a = a;
        thermos.push_back(t);
      }
  std::vector<TransportSpec> transports;
  {
    TransportSpec t;
    t.kind = "affine_theta";
    t.C_mu = 0.1;
    t.C_lambda = 0.1;
    t.kappa0 = 0.1;
    transports.push_back(t);
  }
  for (double beta : {1.0, 2.0, 2.5, 3.0}) {
    TransportSpec t;
    t.kind = "power_kappa";
    t.mu0 = t.mu1 = t.lambda0 = t.lambda1 = t.kappa1 = 0.1;
    t.kappa2 = 0.05;
    t.beta = beta;
    transports.push_back(t);
  }
  {
    TransportSpec t;
    t.kind = "bounded_general";
    t.beta = 2.0;
    transports.push_back(t);
  }
  std::vector<GateCase> out;
  for (int th = 1; th <= 3; ++th)
    for (const auto& t : thermos)
      for (const auto& tr : transports) out.push_back({th, t, tr, theorem_gate(th, t, tr)});
  return out;
}

ExperimentSpec default_experiment(int theorem) {
  ExperimentSpec s;
  s.theorem = theorem;
  if (theorem == 2) {
    s.thermo.kind = "perfect_gas";
    s.thermo.c_v = 1.5;
    s.transport.kind = "affine_theta";
    s.transport.C_mu = s.transport.C_lambda = s.transport.kappa0 = 0.1;
    return s;
  }
  s.thermo.kind = "molecular_radiation";
  s.thermo.kernel = theorem == 1 ? "linear" : "log_tail";
  s.thermo.pbar = 1.0;
  s.thermo.a = 0.1;
  s.transport.kind = "power_kappa";
  s.transport.mu0 = s.transport.mu1 = s.transport.lambda0 = s.transport.lambda1 = s.transport.kappa1 = 0.1;
  s.transport.kappa2 = 0.05;
  s.transport.beta = 2.0;
  if (theorem == 3) {
    s.dim = 2;
    s.collapse_grids = {16, 32};
    s.gronwall_grids = {16, 32};
  }
  return s;
}

void perturb(FieldSet& f, double eps) {
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = (g.xc(i) - g.x0) / (g.x1 - g.x0);
      const double y = g.dim == 2 ? (g.yc(j) - g.y0) / (g.y1 - g.y0) : 0.5;
      const double wall_y = g.dim == 2 ? std::sin(kPi * y) : 1.0;
      f.rho.at(i, j) *= 1.0 + eps * std::cos(kPi * x);
      f.theta.at(i, j) *= 1.0 + eps * std::sin(kPi * x) * wall_y;
      f.u.c[0].at(i, j) += eps * std::sin(2.0 * kPi * x) * wall_y;
    }
}

TheoremReport run_theorem(const ExperimentSpec& spec) {
  TheoremReport R;
  R.theorem = spec.theorem;
  R.gate = theorem_gate(spec.theorem, spec.thermo, spec.transport);
  if (!R.gate.accepted) throw GateError("theorem " + std::to_string(spec.theorem) + " gate: " + R.gate.reason);
  if (spec.collapse_grids.size() < 2) throw ConfigError("collapse needs at least two grids");
  if (spec.gronwall_grids.empty() || spec.eps.empty()) throw ConfigError("gronwall needs grids and eps values");
  const Models md = build_models(spec);
  AtomRange range;

  // Dirac collapse: bit-identical initial data for measure and strong solution.
  const StrongSolution sc = manufactured(spec.collapse_profile, spec.dim, md.thermo, md.transport, spec.profile);
  const int nc = static_cast<int>(spec.collapse_grids.size());
  R.collapse.resize(nc);
  std::vector<AtomicYoungMeasure> collapse_measures(nc);
  parallel_for(nc, spec.jobs, [&](int k) {
    const Grid g = make_grid(spec.dim, spec.collapse_grids[k]);
    Trajectory tr = run_strong_start(sc, md, g, spec.t_collapse, spec.frames, spec.cfl, 0.0);
    collapse_measures[k] = dirac_from_trajectory(tr);
    const auto E = rel_energy_series(collapse_measures[k], sc, md.thermo);
    R.collapse[k] = {g.nx, g.min_h(), E.front(), max_of(E), 0.0};
  });
  for (const auto& V : collapse_measures) range.add(V, md.thermo);
  R.collapse_ok = true;
  for (int k = 0; k < nc; ++k) {
    if (std::abs(R.collapse[k].E0) > 1e-14) {
      R.collapse_ok = false;
      R.failures.push_back("collapse: E_mv(0) = " + fmt(R.collapse[k].E0) + " is not zero for identical data");
    }
    if (k == 0) continue;
    const auto& a = R.collapse[k - 1];
    auto& b = R.collapse[k];
    b.order = std::log(a.max_E / b.max_E) / std::log(a.h / b.h);
    if (!(b.order >= spec.order_min)) {
      R.collapse_ok = false;
      R.failures.push_back("collapse: order " + fmt(b.order) + " < " + fmt(spec.order_min) + " at n=" +
                           std::to_string(b.n));
    }
  }

  // Equilibrium: the discrete scheme holds it exactly.
  {
    const StrongSolution se = manufactured("equilibrium", spec.dim, md.thermo, md.transport, spec.profile);
    const Grid g = make_grid(spec.dim, spec.collapse_grids.front());
    Trajectory tr = run_strong_start(se, md, g, spec.t_collapse, 20, spec.cfl, 0.0);
    const double e = max_of(rel_energy_series(dirac_from_trajectory(tr), se, md.thermo));
    R.checks["equilibrium_max_E"] = e;
    if (!(std::abs(e) <= 1e-10)) {
      R.collapse_ok = false;
      R.failures.push_back("equilibrium: sup E_mv = " + fmt(e) + " > 1e-10");
    }
  }

  // Gronwall: +eps, -eps and their equal-weight mixture on the first grid; +eps[0] on the second.
  const StrongSolution sg = manufactured(spec.gronwall_profile, spec.dim, md.thermo, md.transport, spec.profile);
  struct Job {
    int n;
    double eps;
  };
  std::vector<Job> jobs;
  for (double e : spec.eps) {
    jobs.push_back({spec.gronwall_grids[0], e});
    jobs.push_back({spec.gronwall_grids[0], -e});
  }
  if (spec.gronwall_grids.size() > 1) jobs.push_back({spec.gronwall_grids[1], spec.eps[0]});
  const int nj = static_cast<int>(jobs.size());
  std::vector<AtomicYoungMeasure> measures(nj);
  parallel_for(nj, spec.jobs, [&](int k) {
    const Grid g = make_grid(spec.dim, jobs[k].n);
    measures[k] = dirac_from_trajectory(run_strong_start(sg, md, g, spec.t_gronwall, spec.frames, spec.cfl, jobs[k].eps));
  });
  for (const auto& V : measures) range.add(V, md.thermo);

  auto evaluate = [&](const AtomicYoungMeasure& V, const std::string& kind, double eps) {
    const MVProblem P = prepare(V, md);
    const RelEnergyReport rep = rel_energy_inequality_report(P, sg);
    GronwallRun run;
    run.kind = kind;
    run.eps = eps;
    run.n = V.grid().nx;
    std::vector<double> t, E;
    for (const auto& l : rep.levels) {
      t.push_back(l.t);
      E.push_back(l.E);
    }
    run.E0 = E.front();
    run.E_end = E.back();
    run.fit = fit_gronwall(t, E, spec.growth_factor);
    run.min_slack_rel = run.E0 > 0 ? rep.min_slack / run.E0 : 0.0;
    return run;
  };
  std::vector<double> C_first;
  for (size_t e = 0; e < spec.eps.size(); ++e) {
    const auto& Vp = measures[2 * e];
    const auto& Vm = measures[2 * e + 1];
    R.gronwall.push_back(evaluate(Vp, "plus", spec.eps[e]));
    R.gronwall.push_back(evaluate(Vm, "minus", spec.eps[e]));
    R.gronwall.push_back(evaluate(mix({Vp, Vm}, {0.5, 0.5}), "mixed", spec.eps[e]));
  }
  for (const auto& r : R.gronwall) C_first.push_back(r.fit.C);
  R.C_spread_eps = relative_spread(C_first);
  if (spec.gronwall_grids.size() > 1) {
    R.gronwall.push_back(evaluate(measures.back(), "plus", spec.eps[0]));
    const double c0 = R.gronwall.front().fit.C, c1 = R.gronwall.back().fit.C;
    R.C_spread_grid = std::abs(c0) > 0 ? std::abs(c1 - c0) / std::abs(c0) : 0.0;
  }
  R.gronwall_ok = true;
  for (const auto& r : R.gronwall) {
    if (!(r.E0 > 0.0)) {
      R.gronwall_ok = false;
      R.failures.push_back("gronwall: perturbed data has E_mv(0) = " + fmt(r.E0));
    }
    if (!r.fit.ok) {
      R.gronwall_ok = false;
      R.failures.push_back("gronwall: " + r.kind + " eps=" + fmt(r.eps) + " n=" + std::to_string(r.n) +
                           " exceeds exp(C t) E0 by factor " + fmt(r.fit.max_ratio));
    }
  }
  if (!(R.C_spread_eps <= spec.eps_tolerance)) {
    R.gronwall_ok = false;
    R.failures.push_back("gronwall: C varies by " + fmt(R.C_spread_eps) + " across eps");
  }
  if (!(R.C_spread_grid <= spec.grid_tolerance)) {
    R.gronwall_ok = false;
    R.failures.push_back("gronwall: C varies by " + fmt(R.C_spread_grid) + " across the grid refinement");
  }

  // Theorem-specific hypotheses.
  R.hypotheses_ok = range.finite;
  R.checks["rho_min"] = range.rho_min;
  R.checks["rho_max"] = range.rho_max;
  R.checks["theta_min"] = range.theta_min;
  R.checks["theta_max"] = range.theta_max;
  if (!(range.rho_min > 0.0 && range.theta_min > 0.0)) {
    R.hypotheses_ok = false;
    R.failures.push_back("atoms leave the open positive quadrant");
  }
  if (spec.theorem == 2) {
    R.checks["s_abs_max"] = range.s_abs_max;
    R.checks["theta_cv_over_rho_max"] = range.theta_cv_over_rho;
    if (!(range.s_abs_max <= spec.sbar)) {
      R.hypotheses_ok = false;
      R.failures.push_back("atoms violate |s| <= sbar: max |s| = " + fmt(range.s_abs_max));
    }
    if (!(range.theta_cv_over_rho <= std::exp(spec.sbar))) {
      R.hypotheses_ok = false;
      R.failures.push_back("theta^{c_v} <= exp(sbar) rho fails on atoms");
    }
  }
  if (spec.theorem == 3) {
    double U_sup = 0;
    for (const auto& V : collapse_measures) {
      const Grid& g = V.grid();
      for (double t : V.times())
        for (int j = 0; j < g.ny; ++j)
          for (int i = 0; i < g.nx; ++i) U_sup = std::max(U_sup, sc.at(t, g.xc(i), g.yc(j)).u.norm());
    }
    const long e1 = e1_violations(md.thermo.a, std::max(U_sup, 1.0), 100000, 11);
    const double c_inner = e2_constant(md.thermo, 1e-3, 1e3, 121);
    const double c_outer = e2_constant(md.thermo, 1e-5, 1e5, 201);
    R.checks["E1_violations"] = static_cast<double>(e1);
    R.checks["E2_constant"] = c_inner;
    R.checks["E2_constant_wide"] = c_outer;
    if (e1 != 0) {
      R.hypotheses_ok = false;
      R.failures.push_back("E1 sample inequality violated " + std::to_string(e1) + " times");
    }
    if (!(std::isfinite(c_inner) && c_outer <= 1.01 * c_inner)) {
      R.hypotheses_ok = false;
      R.failures.push_back("E2 constant not attained inside the calibration box: " + fmt(c_inner) + " vs " +
                           fmt(c_outer));
    }
    if (spec.dim == 2) {
      const Grid g0 = make_grid(2, spec.gronwall_grids[0]);
      const double C_p = 1.2 * korn_poincare_constant(g0, md, 3);
      R.checks["korn_poincare_C"] = C_p;
      double worst = 0;
      const VectorTest zero = sine_mode(g0, 1, 1, 0.0);
      for (const auto& V : measures) {
        if (V.grid().nx != g0.nx) continue;
        const KornPoincareReport kp = korn_poincare_check(prepare(V, md), zero, C_p);
        worst = std::max(worst, kp.ratio);
      }
      R.checks["korn_poincare_ratio"] = worst;
      if (!(worst <= 1.0)) {
        R.hypotheses_ok = false;
        R.failures.push_back("Korn-Poincare absorption fails: ratio " + fmt(worst));
      }
    }
  }
  R.pass = R.collapse_ok && R.gronwall_ok && R.hypotheses_ok;
  return R;
}

CompatStudy compat_study(int dim, const std::vector<int>& grids, double t_end) {
  if (grids.size() < 2) throw ConfigError("compat_study needs two grids");
  CompatStudy S;
  const Models md{ThermoModel::perfect_gas(1.5), TransportModel::affine_theta(0.1, 0.1, 0.1)};
  auto residuals = [&](const StrongSolution& s, int n, int frames) {
    const Grid g = make_grid(dim, n);
    Trajectory tr = run_strong_start(s, md, g, t_end, frames, 0.4, 0.0);
    const AtomicYoungMeasure V = dirac_from_trajectory(tr);
    const MVProblem P = prepare(V, md, tr.forcing);
    const TestFunctionSet T = make_test_functions(g, 3);
    const ThetaTilde Th = ThetaTilde::harmonic(g, tr.boundary, V.times());
    CompatLevel c;
    c.n = n;
    c.h = g.min_h();
    c.continuity = continuity_residual(P, T.scalars).max_abs;
    c.momentum = momentum_residual(P, T.dirichlet).max_abs;
    c.velocity = velocity_compat(P, T.tensors).max_abs;
    const TemperatureCompat tc = temperature_compat(P, Th, T.fields);
    c.temperature = tc.consistent.max_abs;
    c.temperature_as_written = tc.as_written.max_abs;
    return c;
  };
  const StrongSolution shear = manufactured("shear", dim, md.thermo, md.transport);
  for (int n : grids) S.levels.push_back(residuals(shear, n, 100));
  S.equilibrium = residuals(manufactured("equilibrium", dim, md.thermo, md.transport), grids.front(), 20);
  S.ok = true;
  const auto& a = S.levels[S.levels.size() - 2];
  const auto& b = S.levels.back();
  const double r = std::log(a.h / b.h);
  auto order = [&](const std::string& name, double ra, double rb, double eq) {
    const double p = std::log(ra / rb) / r;
    S.orders[name] = p;
    if (!(p >= 1.0)) {
      S.ok = false;
      S.failures.push_back(name + " residual order " + fmt(p) + " < 1");
    }
    if (!(eq <= 1e-10)) {
      S.ok = false;
      S.failures.push_back(name + " residual " + fmt(eq) + " on equilibrium exceeds 1e-10");
    }
  };
  order("continuity", a.continuity, b.continuity, S.equilibrium.continuity);
  order("momentum", a.momentum, b.momentum, S.equilibrium.momentum);
  order("velocity", a.velocity, b.velocity, S.equilibrium.velocity);
  order("temperature", a.temperature, b.temperature, S.equilibrium.temperature);
  return S;
}

InequalityStudy inequality_study(const std::vector<int>& grids, double t_end) {
  if (grids.empty()) throw ConfigError("inequality_study needs grids");
  InequalityStudy S;
  const Models md{ThermoModel::perfect_gas(1.5), TransportModel::affine_theta(0.1, 0.1, 0.1)};
  struct Case {
    std::string name;
    BoundaryData bd;
  };
  const std::vector<Case> cases{{"conduction", BoundaryData::affine(1.0, 1.0)}, {"decay", BoundaryData::constant(1.0)}};
  for (const auto& c : cases) {
    for (int n : grids) {
      const Grid g = Grid::line(n);
      FieldSet init = c.name == "decay" ? decay_initial(g, 1.0, 1.0, 0.2, 0.2) : FieldSet(g);
      if (c.name == "conduction") {
        for (int i = 0; i < g.nx; ++i) {
          init.rho.at(i) = 1.0;
          init.u.c[0].at(i) = 0.0;
          init.theta.at(i) = 1.0 + g.xc(i) + 0.3 * std::sin(kPi * g.xc(i));
        }
      }
      sync_ghosts(init, c.bd, 0.0);
      SolverConfig cfg;
      cfg.t_end = t_end;
      cfg.snapshot_dt = t_end / 100;
      const Trajectory tr = simulate(init, cfg, md, c.bd);
      const TestFunctionSet T = make_test_functions(g, 3);
      const ThetaTilde Th = ThetaTilde::harmonic(g, c.bd, [&] {
        std::vector<double> ts;
        for (const auto& f : tr.frames) ts.push_back(f.t);
        return ts;
      }());
      InequalityLevel L;
      L.run = c.name;
      L.n = n;
      L.h = g.min_h();
      L.entropy_slack = entropy_inequality_residual(tr, T.bumps).min_value;
      L.ballistic_slack = ballistic_report(tr, Th).min_slack;
      S.levels.push_back(L);
    }
  }
  S.ok = true;
  for (const auto& c : cases) {
    const InequalityLevel* coarse = nullptr;
    for (const auto& L : S.levels) {
      if (L.run != c.name) continue;
      if (!coarse) {
        coarse = &L;
        S.C_entropy[c.name] = std::max(-L.entropy_slack / L.h, 1e-12);
        S.C_ballistic[c.name] = std::max(-L.ballistic_slack / L.h, 1e-12);
        continue;
      }
      if (!(L.entropy_slack >= -S.C_entropy[c.name] * L.h)) {
        S.ok = false;
        S.failures.push_back(c.name + " n=" + std::to_string(L.n) + ": entropy slack " + fmt(L.entropy_slack) +
                             " below -C h");
      }
      if (!(L.ballistic_slack >= -S.C_ballistic[c.name] * L.h)) {
        S.ok = false;
        S.failures.push_back(c.name + " n=" + std::to_string(L.n) + ": ballistic slack " +
                             fmt(L.ballistic_slack) + " below -C h");
      }
    }
  }
  return S;
}

}  // namespace nsf
