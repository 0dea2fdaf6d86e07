#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsf/young_measure.hpp"

namespace nsf {

using ThetaFn = std::function<double(double x, double y)>;

/// Gaps between block averages of a fine state and the same observables at the block-averaged state.
struct DefectLevel {
  int fine_n = 0;
  std::vector<double> D;   // one per Theta
  double kinetic = 0;      // int avg(rho|u|^2/2) - rho_bar |u_bar|^2 / 2
  double internal = 0;     // int avg(rho e) - rho_bar e(rho_bar, theta_bar)
  double entropy = 0;      // int avg(rho s) - rho_bar s(rho_bar, theta_bar)
  double entropy_abs = 0;  // int avg(|rho s|)
  double energy = 0;       // int avg(rho|u|^2/2 + rho e), for uniform bounds
  double spread = 0;       // (max D - min D) / max |D| over Theta
  std::vector<Mat> rM;     // per coarse cell
  double rM_L1 = 0;        // int |r^M|_F
  FieldSet coarse_state;   // rho_bar, u_bar = avg(rho u) / rho_bar, theta_bar = avg(theta)
};

struct DefectEstimate {
  Grid coarse;
  std::vector<DefectLevel> levels;  // in the order of the family
};

/// Throws ConfigError unless there are at least two members, all on the coarse domain,
/// with cell counts that are multiples of the coarse ones.
DefectEstimate defect_from_refinement(const std::vector<FieldSet>& family, const Grid& coarse, const ThermoModel& m,
                                      const std::vector<ThetaFn>& Thetas);

struct DefectStudySpec {
  int coarse = 16;
  std::vector<int> fine{128, 256, 512};
  int cells_per_period = 8;   // oscillation period in fine cells
  std::vector<int> smooth_coarse{16, 32, 64};
  double rho0 = 1.0, theta0 = 1.0;
  double envelope = 0.5;      // u = sin(x / eps) * envelope * sin(pi x)
  double theta_amp = 0.2;
  double spread_tolerance = 0.05;
  double kinetic_tolerance = 0.05;
  double entropy_tolerance = 1e-3;
  ThermoSpec thermo;
};

struct DefectStudyReport {
  DefectEstimate oscillatory;
  std::vector<DefectEstimate> smooth;  // one per smooth coarse grid
  std::vector<double> smooth_D;
  double smooth_order = 0;
  double kinetic_reference = 0;        // brute-force period average
  double kinetic_rel_error = 0;
  double sin2_mean = 0;
  double spread = 0;
  double entropy_rel = 0;
  double energy_ratio = 0;             // max / min family energy
  DefectBundle bundle;
  DefectCompatReport compat;
  bool pass = false;
  std::vector<std::string> failures;
};

DefectStudyReport run_defect_study(const DefectStudySpec& spec);

/// Mean of sin^2 over one period by midpoint quadrature.
double sin2_period_mean(int samples);

}  // namespace nsf
