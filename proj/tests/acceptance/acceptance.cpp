// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "nsf/apriori.hpp"
#include "nsf/defects.hpp"
#include "nsf/errors.hpp"
#include "nsf/experiments.hpp"
#include "nsf/io.hpp"

using namespace nsf;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct NamedModel {
  std::string name;
  ThermoModel model;
};

// Every equation of state the library ships.
std::vector<NamedModel> shipped_eos() {
  return {{"perfect_gas(c_v=1.5)", ThermoModel::perfect_gas(1.5)},
          {"perfect_gas(c_v=3)", ThermoModel::perfect_gas(3.0)},
          {"mr(log_tail,a=0.1)", ThermoModel::molecular_radiation(MolecularKernel::log_tail(1.0), 0.1)},
          {"mr(log_tail,a=1)", ThermoModel::molecular_radiation(MolecularKernel::log_tail(1.0), 1.0)},
          {"mr(linear,a=0.1)", ThermoModel::molecular_radiation(MolecularKernel::linear(), 0.1)},
          {"mr(zero,a=1)", ThermoModel::molecular_radiation(MolecularKernel::zero(), 1.0)}};
}

// Equations of state admitted by some uniqueness gate; the radiation-only gas has dp/drho = 0.
std::vector<NamedModel> stable_eos() {
  auto all = shipped_eos();
  all.pop_back();
  return all;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome gibbs() {
  double worst = 0;
  std::string where;
  for (const auto& [name, m] : shipped_eos()) {
    const GibbsSuiteReport r = gibbs_suite(m, 10000, kSeed);
    const double w = std::max(r.max_r_rho, r.max_r_theta);
    if (w >= worst) {
      worst = w;
      where = name;
    }
  }
  return {worst <= 1e-8, "max residual " + num(worst) + " (" + where + ") <= 1e-8 over 6 EOS x 1e4 states"};
}

Outcome structure() {
  std::uint64_t viol = 0, samples = 0;
  std::string first;
  double bregman_min = 0;
  for (const auto& [name, m] : stable_eos()) {
    const StructureReport r = validate_structure(m, 10000, kSeed);
    viol += r.stability_violations + r.convexity_violations + r.kernel_violations;
    samples += r.samples;
    if (!r.pass && first.empty()) first = name + ": " + r.first_violation;
    bregman_min = std::min(bregman_min, bregman_equivalence_check(m, 10000, kSeed).min_value);
  }
  const bool ok = viol == 0 && first.empty() && bregman_min >= 0.0;
  return {ok, std::to_string(viol) + " violations in " + std::to_string(samples) + " samples, min Bregman " +
                  num(bregman_min) + (first.empty() ? "" : "; " + first)};
}

Outcome bregman() {
  double worst = 0;
  for (const auto& [name, m] : stable_eos())
    for (int dim : {1, 2}) worst = std::max(worst, bregman_equivalence_check(m, 1000, kSeed, dim).max_rel_gap);
  return {worst <= 1e-9, "max relative gap " + num(worst) + " <= 1e-9 on 1e3 pairs"};
}

Outcome coercivity() {
  StrongState s;
  s.u = Vec::Constant(2, 0.1);
  double c = INFINITY;
  long viol = 0;
  for (const auto& [name, m] : stable_eos()) {
    const CoercivityReport r = coercivity_check(m, CutoffParams{0.1}, s, 100000, kSeed);
    c = std::min(c, r.c_found);
    viol += r.violations;
  }
  return {c > 0.0 && viol == 0, "c = " + num(c) + " over 1e5 atoms, " + std::to_string(viol) + " counterexamples"};
}

Outcome r2() {
  double lo = INFINITY, hi = -INFINITY;
  for (const int theorem : {1, 2, 3}) {
    const ExperimentSpec e = default_experiment(theorem);
    const Models md{make_thermo(e.thermo), make_transport(e.transport)};
    const StrongSolution s = manufactured("shear", 1, md.thermo, md.transport);
    const R2Smallness r = r2_smallness(md, s, Grid::line(64), 0.05, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3});
    lo = std::min(lo, r.slope);
    hi = std::max(hi, r.slope);
  }
  return {lo >= 1.9 && hi <= 2.1, "slopes in [" + num(lo) + ", " + num(hi) + "] within [1.9, 2.1]"};
}

Outcome compat() {
  const CompatStudy s = compat_study(1, {32, 64});
  std::string d;
  for (const auto& [k, v] : s.orders) d += k + " " + num(v) + ", ";
  const auto& e = s.equilibrium;
  d += "equilibrium max " + num(std::max({e.continuity, e.momentum, e.velocity, e.temperature}));
  return {s.ok, "orders " + d + (s.ok ? "" : "; " + s.failures.front())};
}

Outcome inequalities() {
  const InequalityStudy s = inequality_study({32, 64, 128});
  double worst = 0;
  for (const auto& l : s.levels) worst = std::min({worst, l.entropy_slack, l.ballistic_slack});
  return {s.ok, "min slack " + num(worst) + " against -C h with C from n=32" + (s.ok ? "" : "; " + s.failures.front())};
}

Outcome uniqueness() {
  bool ok = true;
  std::string d;
  for (const int theorem : {1, 2, 3}) {
    const TheoremReport r = run_theorem(default_experiment(theorem));
    double order = INFINITY, spread = std::max(r.C_spread_eps, r.C_spread_grid);
    for (size_t k = 1; k < r.collapse.size(); ++k) order = std::min(order, r.collapse[k].order);
    d += "thm" + std::to_string(theorem) + " order " + num(order) + " C spread " + num(spread) + "; ";
    if (!r.pass) {
      ok = false;
      d += "FAILED " + r.failures.front() + "; ";
    }
  }
  return {ok, d};
}

Outcome gates() {
  const auto cases = gate_matrix();
  int accepted = 0, bad = 0;
  for (const auto& c : cases) {
    const bool must_reject = (c.transport.kind == "power_kappa" && c.transport.beta > 2.0) ||
                             (c.thermo.kind == "perfect_gas" && c.thermo.c_v <= 1.0) ||
                             (c.thermo.kind == "molecular_radiation" && c.thermo.radiation == "stefan_boltzmann");
    if (c.verdict.accepted) ++accepted;
    if (must_reject && (c.verdict.accepted || c.verdict.reason.empty())) ++bad;
    if (c.verdict.accepted) {
      try {
        make_thermo(c.thermo);
        make_transport(c.transport);
      } catch (const std::exception&) {
        ++bad;
      }
    }
  }
  return {bad == 0 && cases.size() == 270,
          std::to_string(cases.size()) + " cases, " + std::to_string(accepted) + " accepted, " + std::to_string(bad) +
              " wrong verdicts"};
}

Outcome apriori() {
  const AprioriReport r = run_apriori(AprioriSpec::defaults());
  double worst = 0;
  for (const auto& L : r.levels)
    for (int k = 0; k < kAprioriTerms; ++k) worst = std::max(worst, L.terms[k] / r.C[k]);
  return {r.pass, "max term/C " + num(worst) + " over " + std::to_string(r.levels.size()) +
                      " levels, max principle exact " + (r.max_principle_exact ? "yes" : "no") +
                      (r.pass ? "" : "; " + r.failures.front())};
}

Outcome defects() {
  const DefectStudyReport r = run_defect_study(DefectStudySpec{});
  return {r.pass, "smooth order " + num(r.smooth_order) + ", kinetic rel error " + num(r.kinetic_rel_error) +
                      ", spread " + num(r.spread) + ", compat ratio " + num(r.compat.max_ratio) +
                      (r.pass ? "" : "; " + r.failures.front())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gibbs-relation", gibbs},       {"stability-convexity", structure},
      {"bregman-equivalence", bregman}, {"coercivity", coercivity},
      {"r2-smallness", r2},            {"compatibility-residuals", compat},
      {"entropy-ballistic", inequalities}, {"weak-strong-uniqueness", uniqueness},
      {"hypothesis-gates", gates},     {"apriori-estimate", apriori},
      {"defect-study", defects}};
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-24s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str(), sec);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
