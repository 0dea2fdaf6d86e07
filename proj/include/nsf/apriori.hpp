#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsf/solver.hpp"

namespace nsf {

struct AprioriSpec {
  ThermoSpec thermo;
  TransportSpec transport;
  TransportEnvelope envelope;  // admissibility class; mu_lo and kappa_lo enter the dissipation terms
  int dim = 1;
  int calibration_grid = 16;
  std::vector<int> grids{32, 64, 128};
  double t_end = 0.1;
  int frames = 100;
  double theta_B = 1.0;       // wall temperature at x = x0
  double theta_B_slope = 0.5; // theta_B = theta_B (1 + slope x)
  double rho0 = 1.0, amp_u = 0.2, amp_theta = 0.2;
  double q = 1.5;             // entropy power
  double safety = 1.5;        // C = safety * calibration value
  bool probe_recalibration = true;

  static AprioriSpec defaults();
};

constexpr int kAprioriTerms = 7;
extern const std::array<const char*, kAprioriTerms> kAprioriTermNames;

struct AprioriLevel {
  int n = 0;
  double h = 0;
  std::array<double, kAprioriTerms> terms{};
  double entropy_bound_ratio = 0;  // max rho|S| / c (rho + rho|log rho| + rho [log theta]^+)
  double transport_ratio = 0;      // max_t |int rho s u . grad theta_hat| / (|grad theta_hat|_inf int (rho s^2 + rho |u|^2) / 2)
  double absorption_ratio = 0;     // max_t (a/2) int theta^2 / (int (rho e - theta_hat rho s) + C_abs int (1 + rho))
};

struct AprioriReport {
  std::array<double, kAprioriTerms> C{};
  AprioriLevel calibration;
  std::vector<AprioriLevel> levels;
  double entropy_c = 0, absorption_c = 0;
  double max_principle_raw_violation = 0;
  bool max_principle_exact = false;
  bool envelope_ok = false;
  double conduction_spread = 0;  // relative spread of the conduction block across levels
  bool recalibration_detected = false;
  double recalibration_ratio = 0;  // max term / C with theta_B doubled
  bool pass = false;
  std::vector<std::string> failures;
};

/// Calibrates C on a coarse run, then checks every left-side term on the refinement levels.
/// Throws SolverError on blow-up (a term above 1e6 times its calibration value).
AprioriReport run_apriori(const AprioriSpec& spec);

/// Left-side terms of the a priori estimate along a trajectory, with the intermediate-bound ratios.
AprioriLevel apriori_terms(const Trajectory& tr, const AprioriSpec& spec, const TransportEnvelope& env,
                           double entropy_c, double absorption_c);

/// sup over a log-uniform box of ((a/2) theta^2 - (rho e - T rho s)) / (1 + rho) for T in [T_lo, T_hi].
double calibrate_absorption(const ThermoModel& m, double T_lo, double T_hi);

}  // namespace nsf
