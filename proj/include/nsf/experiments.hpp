#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsf/relative_energy.hpp"

namespace nsf {

struct GateVerdict {
  bool accepted = false;
  std::string reason;
};

/// Hypothesis gate of a uniqueness theorem (1, 2 or 3) for a model/transport request.
GateVerdict theorem_gate(int theorem, const ThermoSpec& thermo, const TransportSpec& transport);

struct GateCase {
  int theorem = 1;
  ThermoSpec thermo;
  TransportSpec transport;
  GateVerdict verdict;
};

/// Every combination of the shipped configuration matrix with its verdict.
std::vector<GateCase> gate_matrix();

struct ExperimentSpec {
  int theorem = 2;
  ThermoSpec thermo;
  TransportSpec transport;
  int dim = 1;
  std::vector<int> collapse_grids{32, 64, 128};
  std::vector<int> gronwall_grids{32, 64};  // eps sweep on the first, one refinement check on the second
  std::vector<double> eps{1e-2, 1e-3};
  std::string collapse_profile = "shear";
  std::string gronwall_profile = "conduction";
  ProfileParams profile;
  double t_collapse = 0.2;
  double t_gronwall = 0.3;
  int frames = 200;
  double cfl = 0.4;
  double growth_factor = 1.2;
  double eps_tolerance = 0.2;
  double grid_tolerance = 0.3;
  double order_min = 1.0;
  double sbar = 3.0;  // entropy bound for theorem 2 atoms
  int jobs = 1;
};

/// Shipped model choices for each theorem.
ExperimentSpec default_experiment(int theorem);

struct CollapseLevel {
  int n = 0;
  double h = 0;
  double E0 = 0;
  double max_E = 0;
  double order = 0;  // against the previous level
};

struct GronwallRun {
  std::string kind;  // "plus", "minus", "mixed"
  double eps = 0;
  int n = 0;
  double E0 = 0;
  double E_end = 0;
  GronwallFit fit;
  double min_slack_rel = 0;  // min slack of the relative energy inequality / E0
};

struct TheoremReport {
  int theorem = 0;
  GateVerdict gate;
  std::vector<CollapseLevel> collapse;
  bool collapse_ok = false;
  std::vector<GronwallRun> gronwall;
  double C_spread_eps = 0;   // max relative deviation of C across eps at the first grid
  double C_spread_grid = 0;  // relative change of C across the grid refinement
  bool gronwall_ok = false;
  std::map<std::string, double> checks;  // theorem-specific hypothesis diagnostics
  bool hypotheses_ok = false;
  std::vector<std::string> failures;
  bool pass = false;
};

/// Throws GateError when the gate rejects; solver failures propagate as SolverError.
TheoremReport run_theorem(const ExperimentSpec& spec);

/// Perturbation of the initial fields by eps times fixed smooth profiles vanishing at the walls.
void perturb(FieldSet& f, double eps);

/// Measure-valued residuals of smooth and equilibrium runs.
struct CompatLevel {
  int n = 0;
  double h = 0;
  double continuity = 0, momentum = 0, velocity = 0, temperature = 0, temperature_as_written = 0;
};
struct CompatStudy {
  std::vector<CompatLevel> levels;
  CompatLevel equilibrium;
  std::map<std::string, double> orders;
  bool ok = false;
  std::vector<std::string> failures;
};
CompatStudy compat_study(int dim, const std::vector<int>& grids, double t_end = 0.1);

struct InequalityLevel {
  std::string run;
  int n = 0;
  double h = 0;
  double entropy_slack = 0;
  double ballistic_slack = 0;
};
struct InequalityStudy {
  std::vector<InequalityLevel> levels;
  std::map<std::string, double> C_entropy, C_ballistic;  // per run, fixed on the coarsest grid
  bool ok = false;
  std::vector<std::string> failures;
};
InequalityStudy inequality_study(const std::vector<int>& grids, double t_end = 0.2);

}  // namespace nsf
