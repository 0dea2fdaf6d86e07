#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nsf/young_measure.hpp"

namespace nsf {

/// Point value of the reference (strong) state.
struct StrongState {
  double rho = 1, theta = 1;
  Vec u;
};

/// E = rho|u - U|^2/2 + H(rho, theta) - dH/drho(r, T)(rho - r) - H(r, T), H = rho(e - T s).
double rel_energy_density(const ThermoModel& m, const PhaseAtom& a, const StrongState& s);
double rel_energy_density(const ThermoModel& m, double rho, double theta, const Vec& u, const StrongState& s);

struct BregmanReport {
  double max_rel_gap = 0;
  double min_value = 0;  // most negative Bregman value seen (>= 0 expected)
  int samples = 0;
};
/// Bregman divergence of the conservative energy in (rho, rho s, rho u) against the direct formula.
BregmanReport bregman_equivalence_check(const ThermoModel& m, int samples, std::uint64_t seed, int dim = 2);

/// chi = b(rho) b(theta), b = 1 on [delta, 1/delta], 0 outside [delta/2, 2/delta], C^1 cubic ramps.
struct CutoffParams {
  double delta = 0.1;
  double chi(double rho, double theta) const;
};

struct EssRes {
  double ess = 0, res = 0;
};
EssRes ess_res_split(double value, const CutoffParams& c, double rho, double theta);

struct CoercivityReport {
  double c_found = 0;
  long violations = 0;
  long samples = 0;
  std::string witness;
};
/// Largest c with E >= c ([|drho|^2 + |dtheta|^2 + |du|^2]_ess + [1 + rho + rho|s| + rho e + rho|u|^2]_res).
CoercivityReport coercivity_check(const ThermoModel& m, const CutoffParams& c, const StrongState& s, long samples,
                                  std::uint64_t seed);

/// The seven remainder groups at one atom; g[2] uses the sign obtained by expanding the entropy term.
struct R2Terms {
  std::array<double, 7> g{};
  double g3_as_printed = 0;
  double total() const;
  double total_as_printed() const;
};
R2Terms remainder_R2_atom(const Models& md, const PhaseAtom& a, const StrongPoint& sp);
/// Cell field of <V; R2> at one level.
ScalarField remainder_R2(const AtomicYoungMeasure& V, int level, const StrongSolution& s, const Models& md);

struct R2Smallness {
  std::vector<double> eps, integral;  // |int <V_eps; R2>| per eps
  double slope = 0;                   // least-squares log-log slope
};

/// Dirac atoms displaced from the strong state at time t by eps times fixed smooth profiles.
R2Smallness r2_smallness(const Models& md, const StrongSolution& s, const Grid& g, double t,
                         const std::vector<double>& eps);

/// Dissipation blocks of the relative energy inequality at one atom.
struct DissipationBlocks {
  double mu_quad = 0, mu_coupling = 0;
  double lambda_quad = 0, lambda_coupling = 0;
  double kappa_quad = 0, kappa_coupling = 0, kappa_difference = 0;
  double sum() const {
    return mu_quad + mu_coupling + lambda_quad + lambda_coupling + kappa_quad + kappa_coupling + kappa_difference;
  }
};
DissipationBlocks dissipation_blocks(const Models& md, const PhaseAtom& a, const StrongPoint& sp);

struct RelEnergyLevel {
  double t = 0;
  double E = 0, E_ess = 0, E_res = 0;
  std::array<double, 4> L{};     // expansion terms
  DissipationBlocks blocks;      // spatial integrals at this level
  double R2 = 0, R2_as_printed = 0;
  double rM_pairing = 0;         // int r^M : grad U
  double defect = 0;
  double tail = 0;               // int <[theta + |p| + |u - U| + rho|s||u|]_res>
  double lhs = 0, rhs = 0, slack = 0;
  double slack_as_printed = 0;   // printed R2 sign and + r^M pairing
};

struct RelEnergyReport {
  std::vector<RelEnergyLevel> levels;
  bool forced = false;  // the inequality chain assumes an unforced strong solution
  double min_slack = 0;
  double gronwall_C = 0;
};

/// Evaluates the chain with Theta = strong temperature; defects are taken from P.
RelEnergyReport rel_energy_inequality_report(const MVProblem& P, const StrongSolution& s, const CutoffParams& cut = {});

/// Relative energy series only (cheaper than the full report).
std::vector<double> rel_energy_series(const AtomicYoungMeasure& V, const StrongSolution& s, const ThermoModel& m);

struct GronwallFit {
  double C = 0;          // least-squares slope of log(E/E0) through the origin
  double max_ratio = 0;  // max E(t) / (exp(C t) E0)
  bool ok = false;       // max_ratio <= factor
};
GronwallFit fit_gronwall(const std::vector<double>& t, const std::vector<double>& E, double factor = 1.2);

}  // namespace nsf
