#include "nsf/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

constexpr double kPi = std::numbers::pi;

StrongPoint blank(int d) {
  StrongPoint p;
  p.grad_rho = Vec::Zero(d);
  p.u = Vec::Zero(d);
  p.u_t = Vec::Zero(d);
  p.grad_u = Mat::Zero(d, d);
  p.hess_u.assign(d, Mat::Zero(d, d));
  p.grad_theta = Vec::Zero(d);
  p.hess_theta = Mat::Zero(d, d);
  return p;
}

// rho solving p(rho, theta) = P0 by Newton on log rho.
double isobaric_density(const ThermoModel& m, double theta, double P0, double guess) {
  double lr = std::log(guess);
  for (int it = 0; it < 200; ++it) {
    const ThermoEval v = eval(m, {std::exp(lr), theta});
    const double f = v.p - P0;
    const double df = v.p_rho * std::exp(lr);
    const double step = f / df;
    lr -= std::clamp(step, -2.0, 2.0);
    if (std::abs(step) < 1e-15) break;
  }
  const double rho = std::exp(lr);
  if (!(rho > 1e-12) || std::abs(eval(m, {rho, theta}).p - P0) > 1e-10 * std::max(1.0, std::abs(P0))) {
    std::ostringstream os;
    os << "no positive density with p = " << P0 << " at theta = " << theta;
    throw DomainError(os.str());
  }
  return rho;
}

StrongSolution conduction(int dim, const ThermoModel& thermo, const TransportModel& tr, const ProfileParams& pp) {
  const double thL = pp.theta_left, thR = pp.theta_right;
  const double KL = kappa_integral(tr, thL);
  const double Bk = kappa_integral(tr, thR) - KL;
  const double P0 = eval(thermo, {pp.rho0, thL}).p;
  isobaric_density(thermo, thR, P0, pp.rho0);
  StrongSolution s;
  s.id = "conduction";
  s.dim = dim;
  s.forced = false;
  s.at = [=](double, double x, double) {
    StrongPoint p = blank(dim);
    const double th = kappa_integral_inverse(tr, KL + Bk * x);
    const Coefficients c = coefficients(tr, 1.0, th);
    const double th_x = Bk / c.kappa;
    const double th_xx = -c.dkappa * th_x * th_x / c.kappa;
    const double rho = isobaric_density(thermo, th, P0, pp.rho0);
    const ThermoEval v = eval(thermo, {rho, th});
    p.rho = rho;
    p.grad_rho[0] = -v.p_theta * th_x / v.p_rho;
    p.theta = th;
    p.grad_theta[0] = th_x;
    p.hess_theta(0, 0) = th_xx;
    return p;
  };
  return s;
}

StrongSolution shear(int dim, const ProfileParams& pp) {
  StrongSolution s;
  s.id = "shear";
  s.dim = dim;
  s.forced = true;
  const double A = pp.A, B = pp.B, C = pp.C, r0 = pp.rho0, t0 = pp.theta0;
  const double pi2 = kPi * kPi;
  if (dim == 1) {
    s.at = [=](double t, double x, double) {
      StrongPoint p = blank(1);
      const double E = std::exp(-t);
      const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
      p.u[0] = A * E * sx;
      p.u_t[0] = -p.u[0];
      p.grad_u(0, 0) = A * E * kPi * cx;
      p.hess_u[0](0, 0) = -A * E * pi2 * sx;
      p.theta = t0 + B * E * sx;
      p.theta_t = -B * E * sx;
      p.grad_theta[0] = B * E * kPi * cx;
      p.hess_theta(0, 0) = -B * E * pi2 * sx;
      p.rho = r0 * (1.0 + C * E * cx);
      p.rho_t = -r0 * C * E * cx;
      p.grad_rho[0] = -r0 * C * E * kPi * sx;
      return p;
    };
    return s;
  }
  s.at = [=](double t, double x, double y) {
    StrongPoint p = blank(2);
    const double E = std::exp(-t);
    const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
    const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
    const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
    const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);
    const double a = A * E;
    p.u << a * s2x * sy * sy, a * sx * sx * s2y;
    p.u_t = -p.u;
    p.grad_u << a * 2 * kPi * c2x * sy * sy, a * kPi * s2x * s2y,  //
        a * kPi * s2x * s2y, a * 2 * kPi * sx * sx * c2y;
    p.hess_u[0] << -a * 4 * pi2 * s2x * sy * sy, a * 2 * pi2 * c2x * s2y,  //
        a * 2 * pi2 * c2x * s2y, a * 2 * pi2 * s2x * c2y;
    p.hess_u[1] << a * 2 * pi2 * c2x * s2y, a * 2 * pi2 * s2x * c2y,  //
        a * 2 * pi2 * s2x * c2y, -a * 4 * pi2 * sx * sx * s2y;
    const double b = B * E;
    p.theta = t0 + b * sx * sy;
    p.theta_t = -b * sx * sy;
    p.grad_theta << b * kPi * cx * sy, b * kPi * sx * cy;
    p.hess_theta << -b * pi2 * sx * sy, b * pi2 * cx * cy,  //
        b * pi2 * cx * cy, -b * pi2 * sx * sy;
    const double c = r0 * C * E;
    p.rho = r0 + c * cx * cy;
    p.rho_t = -c * cx * cy;
    p.grad_rho << -c * kPi * sx * cy, -c * kPi * cx * sy;
    return p;
  };
  return s;
}

}  // namespace

BoundaryData StrongSolution::boundary() const {
  BoundaryData b;
  b.name = "strong:" + id;
  auto f = at;
  b.theta_B = [f](double t, double x, double y) { return f(t, x, y).theta; };
  b.dtheta_B_dt = [f](double t, double x, double y) { return f(t, x, y).theta_t; };
  return b;
}

StrongSolution manufactured(const std::string& id, int dim, const ThermoModel& thermo,
                            const TransportModel& transport, const ProfileParams& pp) {
  if (dim != 1 && dim != 2) throw DomainError("manufactured profiles exist for dim 1 and 2");
  if (id == "equilibrium") {
    StrongSolution s;
    s.id = id;
    s.dim = dim;
    s.forced = false;
    s.at = [dim, pp](double, double, double) {
      StrongPoint p = blank(dim);
      p.rho = pp.rho0;
      p.theta = pp.theta0;
      return p;
    };
    return s;
  }
  if (id == "conduction") return conduction(dim, thermo, transport, pp);
  if (id == "shear") return shear(dim, pp);
  throw ConfigError("unknown manufactured profile '" + id + "'");
}

Vec stress_divergence(const StrongPoint& sp, const TransportModel& transport) {
  const int d = static_cast<int>(sp.u.size());
  const Coefficients c = coefficients(transport, sp.rho, sp.theta);
  const Mat D = sym_part(sp.grad_u);
  const double divu = sp.grad_u.trace();
  Vec grad_div = Vec::Zero(d);
  Vec lap = Vec::Zero(d);
  for (int a = 0; a < d; ++a) {
    lap[a] = sp.hess_u[a].trace();
    for (int b = 0; b < d; ++b) grad_div[a] += sp.hess_u[b](b, a);
  }
  Vec out(d);
  for (int a = 0; a < d; ++a) {
    double v = 0;
    for (int b = 0; b < d; ++b) v += c.dmu * sp.grad_theta[b] * (D(a, b) - (a == b ? divu / d : 0.0));
    v += c.mu * (0.5 * (lap[a] + grad_div[a]) - grad_div[a] / d);
    v += c.dlambda * sp.grad_theta[a] * divu + c.lambda * grad_div[a];
    out[a] = v;
  }
  return out;
}

Forcing forcing(const StrongPoint& sp, const ThermoModel& thermo, const TransportModel& transport) {
  const ThermoEval v = eval(thermo, {sp.rho, sp.theta});
  const Coefficients c = coefficients(transport, sp.rho, sp.theta);
  const double divu = sp.grad_u.trace();
  Forcing f;
  f.F_rho = sp.rho_t + sp.u.dot(sp.grad_rho) + sp.rho * divu;
  const Vec conv = sp.grad_u * sp.u;  // (u . grad) u
  const Vec grad_p = v.p_rho * sp.grad_rho + v.p_theta * sp.grad_theta;
  f.F_m = sp.u * f.F_rho + sp.rho * (sp.u_t + conv) + grad_p - stress_divergence(sp, transport);
  const double e_t = v.e_rho * sp.rho_t + v.e_theta * sp.theta_t;
  const Vec grad_e = v.e_rho * sp.grad_rho + v.e_theta * sp.grad_theta;
  const double div_q = -c.dkappa * sp.grad_theta.squaredNorm() - c.kappa * sp.hess_theta.trace();
  const Mat S = viscous_stress_sym(c, sym_part(sp.grad_u));
  f.F_E = v.e * f.F_rho + sp.rho * (e_t + sp.u.dot(grad_e)) + div_q - ddot(S, sp.grad_u) + v.p * divu;
  return f;
}

FieldSet sample_strong(const StrongSolution& s, const Grid& g, double t) {
  if (s.dim != g.dim) throw DomainError("strong solution and grid dimensions differ");
  FieldSet f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const StrongPoint p = s.at(t, g.xc(i), g.yc(j));
      f.rho.at(i, j) = p.rho;
      f.theta.at(i, j) = p.theta;
      for (int a = 0; a < g.dim; ++a) f.u.c[a].at(i, j) = p.u[a];
    }
  f.t = t;
  sync_ghosts(f, s.boundary(), t);
  return f;
}

}  // namespace nsf
