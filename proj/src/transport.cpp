#include "nsf/transport.hpp"

#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

TransportModel TransportModel::affine_theta(double C_mu, double C_lambda, double kappa0) {
  TransportModel m;
  m.kind = TransportKind::AffineTheta;
  m.C_mu = C_mu;
  m.C_lambda = C_lambda;
  m.kappa0 = kappa0;
  return m;
}

TransportModel TransportModel::power_kappa(double mu0, double mu1, double lambda0, double lambda1, double kappa1,
                                           double kappa2, double beta) {
  TransportModel m;
  m.kind = TransportKind::PowerKappa;
  m.mu0 = mu0;
  m.mu1 = mu1;
  m.lambda0 = lambda0;
  m.lambda1 = lambda1;
  m.kappa1 = kappa1;
  m.kappa2 = kappa2;
  m.beta = beta;
  return m;
}

TransportModel TransportModel::bounded_general(const TransportEnvelope& env) {
  TransportModel m;
  m.kind = TransportKind::BoundedGeneral;
  m.envelope = env;
  return m;
}

TransportModel make_transport(const TransportSpec& s) {
  if (s.kind == "affine_theta") {
    if (!(s.C_mu > 0.0) || !(s.C_lambda >= 0.0) || !(s.kappa0 > 0.0))
      throw GateError("affine_theta requires C_mu > 0, C_lambda >= 0, kappa0 > 0");
    return TransportModel::affine_theta(s.C_mu, s.C_lambda, s.kappa0);
  }
  if (s.kind == "power_kappa") {
    if (!(s.mu0 >= 0.0) || !(s.mu1 >= 0.0) || !(s.mu0 + s.mu1 > 0.0))
      throw GateError("power_kappa requires mu0, mu1 >= 0, not both zero");
    if (!(s.lambda0 >= 0.0) || !(s.lambda1 >= 0.0)) throw GateError("power_kappa requires lambda0, lambda1 >= 0");
    if (!(s.kappa1 > 0.0) || !(s.kappa2 >= 0.0)) throw GateError("power_kappa requires kappa1 > 0, kappa2 >= 0");
    if (!(s.beta >= 0.0)) throw GateError("power_kappa requires beta >= 0");
    if (s.uniqueness_mode && s.beta > 2.0) {
      std::ostringstream os;
      os << "heat conductivity exponent beta=" << s.beta
         << " > 2 refused in uniqueness mode: the residual term [1 + theta^beta]_res is then not dominated "
            "by the radiation energy a theta^2; this growth does not allow us to prove weak-strong uniqueness";
      throw GateError(os.str());
    }
    return TransportModel::power_kappa(s.mu0, s.mu1, s.lambda0, s.lambda1, s.kappa1, s.kappa2, s.beta);
  }
  if (s.kind == "bounded_general") {
    TransportEnvelope env;
    env.beta = s.beta;
    if (!(env.beta >= 2.0)) throw GateError("bounded_general envelope requires beta >= 2");
    return TransportModel::bounded_general(env);
  }
  throw ConfigError("unknown transport kind '" + s.kind + "'");
}

Coefficients coefficients(const TransportModel& m, double /*rho*/, double theta) {
  Coefficients c;
  switch (m.kind) {
    case TransportKind::AffineTheta:
      c.mu = m.C_mu * (1.0 + theta);
      c.lambda = m.C_lambda * (1.0 + theta);
      c.kappa = m.kappa0 * (1.0 + theta);
      c.dmu = m.C_mu;
      c.dlambda = m.C_lambda;
      c.dkappa = m.kappa0;
      return c;
    case TransportKind::PowerKappa:
      c.mu = m.mu0 + m.mu1 * theta;
      c.lambda = m.lambda0 + m.lambda1 * theta;
      c.kappa = m.kappa1 + m.kappa2 * std::pow(theta, m.beta);
      c.dmu = m.mu1;
      c.dlambda = m.lambda1;
      c.dkappa = (m.beta == 0.0 || m.kappa2 == 0.0) ? 0.0 : m.kappa2 * m.beta * std::pow(theta, m.beta - 1.0);
      return c;
    case TransportKind::BoundedGeneral:
      throw DomainError("bounded_general is an envelope class without a coefficient law");
  }
  return c;
}

Mat sym_part(const Mat& A) {
  if (A.rows() != A.cols()) throw DomainError("sym_part: matrix is not square");
  return 0.5 * (A + A.transpose());
}

Mat traceless_sym(const Mat& A) {
  Mat D = sym_part(A);
  const double tr = D.trace() / static_cast<double>(D.rows());
  D.diagonal().array() -= tr;
  return D;
}

Mat viscous_stress_sym(const Coefficients& c, const Mat& D_u) {
  Mat S = c.mu * traceless_sym(D_u);
  S.diagonal().array() += c.lambda * D_u.trace();
  return S;
}

Mat viscous_stress(const TransportModel& m, ThermoState st, const Mat& grad_u) {
  if (grad_u.rows() != grad_u.cols()) throw DomainError("viscous_stress: velocity gradient is not square");
  return viscous_stress_sym(coefficients(m, st.rho, st.theta), grad_u);
}

Vec heat_flux(const TransportModel& m, ThermoState st, const Vec& grad_theta) {
  return -coefficients(m, st.rho, st.theta).kappa * grad_theta;
}

double kappa_primitive(const TransportModel& m, double theta) {
  if (!(theta > 0.0)) throw DomainError("kappa_primitive requires theta > 0");
  const double lt = std::log(theta);
  switch (m.kind) {
    case TransportKind::AffineTheta:
      return m.kappa0 * (lt + theta - 1.0);
    case TransportKind::PowerKappa: {
      const double tail = (m.beta == 0.0) ? m.kappa2 * lt : m.kappa2 * std::expm1(m.beta * lt) / m.beta;
      return m.kappa1 * lt + tail;
    }
    case TransportKind::BoundedGeneral:
      break;
  }
  throw DomainError("bounded_general has no closed-form primitive");
}

double kappa_integral(const TransportModel& m, double theta) {
  switch (m.kind) {
    case TransportKind::AffineTheta:
      return m.kappa0 * ((theta - 1.0) + 0.5 * (theta * theta - 1.0));
    case TransportKind::PowerKappa:
      return m.kappa1 * (theta - 1.0) + m.kappa2 * (std::pow(theta, m.beta + 1.0) - 1.0) / (m.beta + 1.0);
    case TransportKind::BoundedGeneral:
      break;
  }
  throw DomainError("bounded_general has no closed-form Kirchhoff potential");
}

double kappa_integral_inverse(const TransportModel& m, double value) {
  if (m.kind == TransportKind::AffineTheta) {
    // kappa0 (theta + theta^2/2 - 3/2) = value
    const double c = value / m.kappa0 + 1.5;
    return -1.0 + std::sqrt(1.0 + 2.0 * c);
  }
  double th = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double f = kappa_integral(m, th) - value;
    const double df = coefficients(m, 1.0, th).kappa;
    double next = th - f / df;
    if (next <= 0.0) next = 0.5 * th;
    if (std::abs(next - th) <= 1e-15 * th) return next;
    th = next;
  }
  return th;
}

double entropy_production_density(const TransportModel& m, ThermoState st, const Mat& D_u, const Vec& D_theta) {
  if (!(st.theta > 0.0)) throw DomainError("entropy production requires theta > 0");
  const Coefficients c = coefficients(m, st.rho, st.theta);
  const Mat S = viscous_stress_sym(c, D_u);
  return (ddot(S, D_u) + c.kappa * D_theta.squaredNorm() / st.theta) / st.theta;
}

EnvelopeReport check_envelope(const TransportModel& law, const TransportEnvelope& env, int samples) {
  EnvelopeReport r;
  auto fail = [&](const char* what, double th) {
    if (r.pass) {
      r.pass = false;
      r.first_violation = what;
      r.witness_theta = th;
    }
  };
  for (int i = 0; i < samples; ++i) {
    const double th = std::pow(10.0, -4.0 + 8.0 * i / (samples - 1));
    const Coefficients c = coefficients(law, 1.0, th);
    const double lin = 1.0 + th;
    const double pw = 1.0 + std::pow(th, env.beta);
    if (c.mu < env.mu_lo * lin || c.mu > env.mu_hi * lin) fail("mu outside envelope", th);
    if (std::abs(c.dmu) > env.dmu_max) fail("|mu'| exceeds bound", th);
    if (c.lambda < 0.0 || c.lambda > env.lambda_hi * lin) fail("lambda outside envelope", th);
    if (c.kappa < env.kappa_lo * pw || c.kappa > env.kappa_hi * pw) fail("kappa outside envelope", th);
  }
  return r;
}

std::string to_string(TransportKind k) {
  switch (k) {
    case TransportKind::AffineTheta: return "affine_theta";
    case TransportKind::PowerKappa: return "power_kappa";
    case TransportKind::BoundedGeneral: return "bounded_general";
  }
  return "?";
}

}  // namespace nsf
