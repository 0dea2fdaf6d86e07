#pragma once

#include <string>

#include "nsf/linalg.hpp"
#include "nsf/thermodynamics.hpp"

namespace nsf {

enum class TransportKind { AffineTheta, PowerKappa, BoundedGeneral };

/// Envelope for the BoundedGeneral class:
///   mu_lo (1+theta) <= mu <= mu_hi (1+theta), |mu'| <= dmu_max,
///   0 <= lambda <= lambda_hi (1+theta),
///   kappa_lo (1+theta^beta) <= kappa <= kappa_hi (1+theta^beta).
struct TransportEnvelope {
  double mu_lo = 0.1, mu_hi = 10.0, dmu_max = 10.0;
  double lambda_hi = 10.0;
  double kappa_lo = 0.1, kappa_hi = 10.0;
  double beta = 2.0;
};

struct TransportModel {
  TransportKind kind = TransportKind::AffineTheta;
  // AffineTheta: mu = C_mu (1+theta), lambda = C_lambda (1+theta), kappa = kappa0 (1+theta).
  double C_mu = 1.0, C_lambda = 0.0, kappa0 = 1.0;
  // PowerKappa: mu = mu0 + mu1 theta, lambda = lambda0 + lambda1 theta, kappa = kappa1 + kappa2 theta^beta.
  double mu0 = 1.0, mu1 = 0.0, lambda0 = 0.0, lambda1 = 0.0, kappa1 = 1.0, kappa2 = 0.0, beta = 2.0;
  TransportEnvelope envelope;

  static TransportModel affine_theta(double C_mu, double C_lambda, double kappa0);
  static TransportModel power_kappa(double mu0, double mu1, double lambda0, double lambda1, double kappa1,
                                    double kappa2, double beta);
  static TransportModel bounded_general(const TransportEnvelope& env);
};

struct TransportSpec {
  std::string kind = "affine_theta";
  double C_mu = 1.0, C_lambda = 0.0, kappa0 = 1.0;
  double mu0 = 1.0, mu1 = 0.0, lambda0 = 0.0, lambda1 = 0.0, kappa1 = 1.0, kappa2 = 0.0, beta = 2.0;
  bool uniqueness_mode = true;
  bool operator==(const TransportSpec&) const = default;
};

/// Gate-checked construction. PowerKappa with beta > 2 is refused in uniqueness mode.
TransportModel make_transport(const TransportSpec& spec);

struct Coefficients {
  double mu = 0, lambda = 0, kappa = 0;
  double dmu = 0, dlambda = 0, dkappa = 0;  // theta-derivatives
};

/// Coefficient laws; rho is accepted for signature generality and ignored by all shipped kinds.
/// BoundedGeneral has no law and throws DomainError.
Coefficients coefficients(const TransportModel& m, double rho, double theta);

Mat sym_part(const Mat& A);
Mat traceless_sym(const Mat& A);

/// S = mu D0(grad_u) + lambda (div u) I.
Mat viscous_stress(const TransportModel& m, ThermoState st, const Mat& grad_u);
/// Same law applied to an already symmetric surrogate D_u.
Mat viscous_stress_sym(const Coefficients& c, const Mat& D_u);

/// q = -kappa grad theta.
Vec heat_flux(const TransportModel& m, ThermoState st, const Vec& grad_theta);

/// K with K' = kappa / theta and K(1) = 0.
double kappa_primitive(const TransportModel& m, double theta);
/// Kirchhoff potential with derivative kappa, zero at theta = 1.
double kappa_integral(const TransportModel& m, double theta);
/// Inverse of kappa_integral.
double kappa_integral_inverse(const TransportModel& m, double value);

/// sigma = (S:D_u + kappa |D_theta|^2 / theta) / theta.
double entropy_production_density(const TransportModel& m, ThermoState st, const Mat& D_u, const Vec& D_theta);

struct EnvelopeReport {
  bool pass = true;
  std::string first_violation;
  double witness_theta = 0;
};

/// Checks a concrete law against an envelope on a log-uniform theta sweep.
EnvelopeReport check_envelope(const TransportModel& law, const TransportEnvelope& env, int samples = 2000);

std::string to_string(TransportKind k);

}  // namespace nsf
