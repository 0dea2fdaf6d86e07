#pragma once

#include <functional>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/manufactured.hpp"
#include "nsf/thermodynamics.hpp"
#include "nsf/transport.hpp"

namespace nsf {

struct Models {
  ThermoModel thermo;
  TransportModel transport;
};

struct SolverConfig {
  double cfl = 0.4;
  double t_end = 0.1;
  double floor = 1e-10;        // positivity floor for rho and theta
  double snapshot_dt = 0.0;    // 0 stores every accepted step
  long max_steps = 10'000'000;
};

/// Space-time source terms; empty means unforced.
using ForcingFn = std::function<Forcing(double t, double x, double y)>;

ForcingFn forcing_of(const StrongSolution& s, const Models& m);

struct Tendency {
  ScalarField rho;
  VectorField m;
  ScalarField rho_e;
};

/// Semi-discrete right-hand side in (rho, rho u, rho e). Ghosts of `s` must be synced.
Tendency rhs(const FieldSet& s, const Models& m, const BoundaryData& bd, const ForcingFn& f = {});

/// CFL * min(h / (|u| + c_s), h^2 / (2 nu)), nu = max((mu + lambda)/rho, kappa/(rho e_theta)).
double stable_dt(const FieldSet& s, const Models& m, double cfl);

double sound_speed(const ThermoModel& m, ThermoState st);

struct StepInfo {
  double dt_taken = 0;
  int rejections = 0;
};

/// One SSP-RK2 step of size dt; a failed positivity check halves dt once, then throws SolverError.
FieldSet step(const FieldSet& s, double dt, const SolverConfig& cfg, const Models& m, const BoundaryData& bd,
              const ForcingFn& f = {}, StepInfo* info = nullptr);

struct Trajectory {
  Models models;
  BoundaryData boundary;
  ForcingFn forcing;
  std::vector<FieldSet> frames;
  long steps = 0;
  int rejections = 0;
  const Grid& grid() const { return frames.front().grid(); }
};

Trajectory simulate(const FieldSet& init, const SolverConfig& cfg, const Models& m, const BoundaryData& bd,
                    const ForcingFn& f = {});

/// Totals used for the time-series output.
struct Totals {
  double t = 0;
  double mass = 0;
  Vec momentum;
  double energy = 0;      // integral of rho |u|^2 / 2 + rho e
  double entropy = 0;     // integral of rho s
  double ballistic = 0;   // integral of rho |u|^2 / 2 + rho e - Theta rho s
  double wall_heat = 0;   // outward heat flux through the boundary
};
Totals totals(const FieldSet& s, const Models& m, const BoundaryData& bd, const ScalarField* Theta = nullptr);

/// Initial condition with smooth velocity and temperature bumps over a constant state, matching theta_B.
FieldSet decay_initial(const Grid& g, double rho0, double theta_wall, double amp_u, double amp_theta);

}  // namespace nsf
