#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nsf/linalg.hpp"

namespace nsf {

enum class EosKind { PerfectGas, MolecularRadiation };
enum class KernelKind { Zero, Linear, LogTail };
enum class RadiationLaw { Quadratic, StefanBoltzmann };

struct KernelEval {
  double P = 0, dP = 0, S = 0, dS = 0;
  double G_over_q = 0;  // (5/3) P / q - P', in closed form
};

/// Molecular pressure kernel P(q) and its entropy kernel S(q), q = rho / theta^{3/2}.
///
/// Zero:    P = 0, S = 0 (radiation-only gas).
/// Linear:  P = q, S = -log q (monatomic ideal gas).
/// LogTail: P = q^{5/3} [pbar + w^-2 - 2 w^-1 + 2 log(1 + 1/w)], w = q^{1/3},
///          S = 3 log(1 + 1/w); P/q^{5/3} -> pbar and S -> 0 as q -> inf.
class MolecularKernel {
 public:
  static MolecularKernel zero() { return MolecularKernel(KernelKind::Zero, 0.0); }
  static MolecularKernel linear() { return MolecularKernel(KernelKind::Linear, 0.0); }
  static MolecularKernel log_tail(double pbar) { return MolecularKernel(KernelKind::LogTail, pbar); }

  KernelKind kind() const { return kind_; }
  double pbar() const { return pbar_; }
  KernelEval operator()(double q) const;

 private:
  MolecularKernel(KernelKind k, double pbar) : kind_(k), pbar_(pbar) {}
  KernelKind kind_;
  double pbar_;
};

struct ThermoModel {
  EosKind kind = EosKind::PerfectGas;
  double c_v = 1.5;
  double a = 0.0;
  MolecularKernel kernel = MolecularKernel::zero();

  /// Unchecked constructors; use make_thermo for gate-checked construction.
  static ThermoModel perfect_gas(double c_v);
  static ThermoModel molecular_radiation(MolecularKernel kernel, double a);
};

struct ThermoSpec {
  std::string kind = "perfect_gas";
  double c_v = 1.5;
  double a = 1.0;
  std::string kernel = "log_tail";
  double pbar = 1.0;
  std::string radiation = "quadratic";
  bool operator==(const ThermoSpec&) const = default;
};

/// Builds a model, rejecting requests outside the supported hypotheses (GateError).
ThermoModel make_thermo(const ThermoSpec& spec);

struct ThermoState {
  double rho = 1.0;
  double theta = 1.0;
};

struct ThermoEval {
  double p = 0, e = 0, s = 0;
  double p_rho = 0, p_theta = 0;
  double e_rho = 0, e_theta = 0;
  double s_rho = 0, s_theta = 0;
};

ThermoEval eval(const ThermoModel& m, ThermoState st);

struct GibbsResidual {
  double r_rho = 0;
  double r_theta = 0;
  // Largest |analytic - central difference| over the four e/s partials.
  double fd_mismatch = 0;
  // Gibbs residuals recomputed from central-difference partials.
  double fd_r_rho = 0;
  double fd_r_theta = 0;
};

/// r_theta = theta s_theta - e_theta, r_rho = theta s_rho - e_rho + p/rho^2.
/// `h_rel` scales the central-difference step as h = h_rel (1 + |x|).
GibbsResidual gibbs_residual(const ThermoModel& m, ThermoState st, double h_rel = 1e-5);

struct GibbsSuiteReport {
  std::uint64_t samples = 0;
  // Residuals divided by 1 + |e| + |theta s|.
  double max_r_rho = 0, max_r_theta = 0;
  double max_abs_r_rho = 0, max_abs_r_theta = 0;
  double witness_rho = 0, witness_theta = 0;  // state of the largest normalized residual
};

/// Log-uniform (rho, theta) samples in [lo, hi]^2.
GibbsSuiteReport gibbs_suite(const ThermoModel& m, std::uint64_t samples, std::uint64_t seed, double lo = 1e-3,
                             double hi = 1e3);

/// H = rho (e - Theta s).
double ballistic_energy(const ThermoModel& m, ThermoState st, double Theta);

/// Gibbs free enthalpy e - theta s + p/rho, i.e. d(rho e)/d rho at fixed S.
double free_enthalpy(const ThermoModel& m, ThermoState st);

struct ConservativeState {
  double rho = 1.0;
  double S = 0.0;
  Vec m = Vec::Zero(1);
};

constexpr double kThetaMin = 1e-12;
constexpr double kThetaMax = 1e12;

/// Inverts rho s(rho, theta) = S for theta by safeguarded Newton on log theta.
double temperature_from_entropy(const ThermoModel& m, double rho, double S);
/// Inverts rho e(rho, theta) = E for theta.
double temperature_from_internal_energy(const ThermoModel& m, double rho, double rho_e);

double conservative_energy(const ThermoModel& m, const ConservativeState& c);

struct ConservativePartials {
  double dE_drho = 0;
  double dE_dS = 0;
  Vec dE_dm;
};
ConservativePartials conservative_partials(const ThermoModel& m, const ConservativeState& c);

ConservativeState to_conservative(const ThermoModel& m, ThermoState st, const Vec& u);

struct StructureReport {
  bool pass = true;
  std::string first_violation;
  double witness_rho = 0, witness_theta = 0;
  std::uint64_t samples = 0;
  std::uint64_t stability_violations = 0;
  std::uint64_t convexity_violations = 0;
  std::uint64_t kernel_violations = 0;
  // Checks beyond the sampled predicates, reported separately.
  bool strict_pbar_positive = true;
  bool strict_third_law_limit = true;
  double kernel_G_over_q_max = 0;  // sup of (5/3 P - P' q)/q on the q samples
};

/// Samples log-uniform (rho, theta) in [1e-3, 1e3]^2 and checks stability signs,
/// kernel monotonicity, S' < 0, monotone decrease of S, and midpoint convexity of
/// the conservative energy.
StructureReport validate_structure(const ThermoModel& m, std::uint64_t samples, std::uint64_t seed = 7,
                                   double kernel_c = 1.0);

struct EntropyBound {
  double lhs = 0;
  double rhs = 0;
};

/// lhs = rho |S(q)|, rhs = c (rho + rho |log rho| + rho [log theta]^+).
EntropyBound entropy_growth_bound(const ThermoModel& m, ThermoState st, double c);

/// Smallest c making entropy_growth_bound hold on a log-uniform sweep.
double calibrate_entropy_bound(const ThermoModel& m, double lo, double hi, int per_axis);

std::string to_string(EosKind k);
std::string to_string(KernelKind k);

}  // namespace nsf
