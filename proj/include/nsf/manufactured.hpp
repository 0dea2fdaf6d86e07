#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/thermodynamics.hpp"
#include "nsf/transport.hpp"

namespace nsf {

/// Analytic values and derivatives of (rho, u, theta) at one space-time point.
struct StrongPoint {
  double rho = 1, rho_t = 0;
  Vec grad_rho;
  Vec u, u_t;
  Mat grad_u;               // grad_u(a, b) = d u_a / d x_b
  std::vector<Mat> hess_u;  // hess_u[a](b, c) = d^2 u_a / d x_b d x_c
  double theta = 1, theta_t = 0;
  Vec grad_theta;
  Mat hess_theta;
};

struct ProfileParams {
  double rho0 = 1.0;
  double theta0 = 1.0;
  double A = 0.2;  // velocity amplitude
  double B = 0.2;  // temperature amplitude
  double C = 0.2;  // density amplitude
  double theta_left = 1.0;
  double theta_right = 2.0;
};

/// A smooth solution of the forced system; forcing vanishes identically for unforced profiles.
struct StrongSolution {
  std::string id;
  int dim = 1;
  bool forced = false;
  std::function<StrongPoint(double t, double x, double y)> at;

  /// Wall temperature equal to the trace of theta.
  BoundaryData boundary() const;
};

/// Profiles: "equilibrium", "conduction" (steady isobaric heat conduction), "shear" (decaying, forced).
StrongSolution manufactured(const std::string& id, int dim, const ThermoModel& thermo,
                            const TransportModel& transport, const ProfileParams& pp = {});

struct Forcing {
  double F_rho = 0;
  Vec F_m;
  double F_E = 0;
};

/// Sources making the strong solution exact:
///   d_t rho + div(rho u) = F_rho
///   d_t(rho u) + div(rho u x u) + grad p - div S = F_m
///   d_t(rho e) + div(rho e u) + div q - S : grad u + p div u = F_E
Forcing forcing(const StrongPoint& sp, const ThermoModel& thermo, const TransportModel& transport);

/// div S evaluated from the analytic derivatives.
Vec stress_divergence(const StrongPoint& sp, const TransportModel& transport);

/// Cell-center samples of the strong solution with boundary-consistent ghosts.
FieldSet sample_strong(const StrongSolution& s, const Grid& g, double t);

}  // namespace nsf
