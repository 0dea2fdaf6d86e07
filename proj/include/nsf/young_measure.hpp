#pragma once

#include <string>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/manufactured.hpp"
#include "nsf/solver.hpp"
#include "nsf/test_functions.hpp"

namespace nsf {

/// One point of phase space: density, velocity, temperature and the two gradient surrogates.
struct PhaseAtom {
  double rho = 1;
  Vec u;
  double theta = 1;
  Mat D_u;      // symmetric
  Vec D_theta;
};

struct WeightedAtom {
  double w = 1;
  PhaseAtom a;
};

/// Finitely many weighted atoms per cell and per time level.
class AtomicYoungMeasure {
 public:
  AtomicYoungMeasure() = default;
  AtomicYoungMeasure(const Grid& g, std::vector<double> times);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& times() const { return times_; }
  int levels() const { return static_cast<int>(times_.size()); }

  std::vector<WeightedAtom>& cell(int level, int i, int j = 0);
  const std::vector<WeightedAtom>& cell(int level, int i, int j = 0) const;

  /// Throws DomainError unless every cell carries nonnegative weights summing to one (within 1e-12)
  /// and symmetric D_u.
  void validate() const;

 private:
  Grid grid_;
  std::vector<double> times_;
  std::vector<std::vector<WeightedAtom>> atoms_;
};

/// Delta measure at each stored frame; D_u = sym(grad_h u), D_theta = grad_h theta with Dirichlet walls.
AtomicYoungMeasure dirac_from_frames(const std::vector<FieldSet>& frames);
AtomicYoungMeasure dirac_from_trajectory(const Trajectory& tr);
/// Delta measure at a strong solution sampled at the given times, with exact gradients.
AtomicYoungMeasure dirac_from_strong(const StrongSolution& s, const Grid& g, const std::vector<double>& times);

/// Convex combination sum_k w_k V_k of measures on the same grid and time levels.
AtomicYoungMeasure mix(const std::vector<AtomicYoungMeasure>& parts, const std::vector<double>& weights);

using Observable = std::function<double(const PhaseAtom&)>;

/// <V; f> per cell at one level; throws DomainError naming a witness atom if f is not finite there.
ScalarField expect(const AtomicYoungMeasure& V, int level, const Observable& f);

/// Atom-level energy densities with the vacuum limits at rho = 0.
double kinetic_density(const PhaseAtom& a);
double internal_energy_density(const ThermoModel& m, const PhaseAtom& a);
double entropy_density(const ThermoModel& m, const PhaseAtom& a);
/// (1/theta)(S(D_u) : D_u + kappa |D_theta|^2 / theta).
double entropy_production(const Models& m, const PhaseAtom& a);

/// Theta-tilde at cell centers per level (or a single time-independent level).
struct ThetaTilde {
  std::string name;
  std::vector<ScalarField> value, dt;
  std::vector<VectorField> grad;
  int pick(int level) const { return value.size() == 1 ? 0 : level; }
  double at(int level, int i, int j) const { return value[pick(level)](i, j); }

  static ThetaTilde analytic(const std::string& name, const Grid& g, const std::vector<double>& times,
                             const std::function<double(double, double, double)>& f,
                             const std::function<double(double, double, double)>& f_t,
                             const std::function<Vec(double, double, double)>& grad);
  static ThetaTilde from_strong(const StrongSolution& s, const Grid& g, const std::vector<double>& times);
  /// Discrete harmonic extension of theta_B per level; time derivative by differences of levels.
  static ThetaTilde harmonic(const Grid& g, const BoundaryData& bd, const std::vector<double>& times);
};

/// Per-level cell moments of a measure, shared by all measure-valued residuals.
struct LevelMoments {
  std::vector<double> rho, rs, energy, sigma, half_u2, inv_theta, g_over_theta, theta, p;
  std::vector<Vec> m, u, rsu, kDth, Dth;
  std::vector<Mat> mm, D, S;
};

struct MVProblem {
  const AtomicYoungMeasure* V = nullptr;
  Models models;
  ForcingFn forcing;
  std::vector<LevelMoments> moments;
  /// Concentration defect D(tau) and momentum defect r^M(tau) per level (zero when absent).
  std::vector<double> defect;
  std::vector<std::vector<Mat>> rM;
};

MVProblem prepare(const AtomicYoungMeasure& V, const Models& m, const ForcingFn& forcing = {});

/// Momentum defect density per level and cell, dissipation defect and compatibility weight per level.
struct DefectBundle {
  std::vector<std::vector<Mat>> rM;
  std::vector<double> D;
  std::vector<double> xi;
};

/// Installs the defects into P; throws DomainError on shape mismatch or negative D or xi.
void attach(MVProblem& P, const DefectBundle& b);

struct ResidualReport {
  std::string clause;
  double max_abs = 0;                // max |residual| over tests and levels
  double min_value = 0;              // most negative value (inequalities)
  std::string worst_test;
  int worst_level = 0;
  std::vector<double> per_level;     // worst |residual| (equalities) or min slack (inequalities)
};

/// Continuity weak form with C^1 scalar tests.
ResidualReport continuity_residual(const MVProblem& P, const std::vector<ScalarTest>& tests);
/// Momentum weak form with tests vanishing on the boundary, including the r^M pairing.
ResidualReport momentum_residual(const MVProblem& P, const std::vector<VectorTest>& tests);
/// -int int <u> . div T - int int <D_u> : T over [0, T].
ResidualReport velocity_compat(const MVProblem& P, const std::vector<TensorTest>& tests);

struct TemperatureCompat {
  ResidualReport as_written;   // -<theta - Theta> div psi + <D_theta - grad Theta> . psi
  ResidualReport consistent;   // -<theta - Theta> div psi - <D_theta - grad Theta> . psi
};
TemperatureCompat temperature_compat(const MVProblem& P, const ThetaTilde& Th, const std::vector<VectorTest>& tests);

/// Entropy inequality slack (>= 0 required) for nonnegative bumps.
ResidualReport entropy_mv_residual(const MVProblem& P, const std::vector<ScalarTest>& bumps);

struct BallisticLevel {
  double t = 0;
  double lhs = 0, rhs = 0, slack = 0;
  double energy = 0;       // int <rho|u|^2/2 + rho e - Theta rho s>
  double dissipation = 0;  // int int <sigma> Theta
};
struct BallisticReport {
  std::vector<BallisticLevel> levels;
  double min_slack = 0;
};
BallisticReport ballistic_mv_residual(const MVProblem& P, const ThetaTilde& Th);

/// Wrappers on a trajectory's Dirac measure.
ResidualReport entropy_inequality_residual(const Trajectory& tr, const std::vector<ScalarTest>& bumps);
BallisticReport ballistic_report(const Trajectory& tr, const ThetaTilde& Th);

struct DefectCompatReport {
  double max_ratio = 0;  // max |<r^M; grad phi>| / (xi D ||phi||_C1)
  bool ok = true;
};
DefectCompatReport defect_compat_check(const MVProblem& P, const std::vector<double>& xi,
                                       const std::vector<VectorTest>& tests);

struct KornPoincareReport {
  double lhs = 0;             // int int <|u - U|^2>
  double rhs_traceless = 0;   // C_P int int <|D0(D_u) - D0(grad U)|^2>
  double rhs_full = 0;        // same with the full symmetric part of grad U
  double rhs_sym = 0;         // C_P int int <|D_u - D(grad U)|^2>
  double ratio = 0;           // lhs / rhs_traceless
};
/// U is a zero-trace test field; C_P scales the right-hand sides.
KornPoincareReport korn_poincare_check(const MVProblem& P, const VectorTest& U, double C_P);

struct InitialEnergyReport {
  std::vector<double> values;  // one per Theta
  bool finite = true;
};
/// int <rho|u|^2/2 + rho e - Theta rho s> at level 0 for constant Theta values.
InitialEnergyReport initial_energy_check(const AtomicYoungMeasure& V, const ThermoModel& m,
                                         const std::vector<double>& Thetas);

/// Trapezoid rule over levels 0..k of per-level values.
double time_integral(const std::vector<double>& times, const std::vector<double>& values, int k);

}  // namespace nsf
