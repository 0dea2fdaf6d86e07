#include "nsf/relative_energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

Mat traceless(const Mat& A) {
  const int d = static_cast<int>(A.rows());
  return A - (A.trace() / d) * Mat::Identity(d, d);
}

// H_T(rho, theta) = rho e - T rho s with the vacuum limits.
double H(const ThermoModel& m, double rho, double theta, double T) {
  PhaseAtom a;
  a.rho = rho;
  a.theta = theta;
  return internal_energy_density(m, a) - T * entropy_density(m, a);
}

double ramp(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

double bump(double x, double delta) {
  const double lo = delta, hi = 1.0 / delta;
  if (x <= 0.5 * lo || x >= 2.0 * hi) return 0.0;
  if (x < lo) return ramp((x - 0.5 * lo) / (0.5 * lo));
  if (x > hi) return 1.0 - ramp((x - hi) / hi);
  return 1.0;
}

StrongState state_of(const StrongPoint& p) { return {p.rho, p.theta, p.u}; }

}  // namespace

double rel_energy_density(const ThermoModel& m, double rho, double theta, const Vec& u, const StrongState& s) {
  if (!(s.rho > 0.0) || !(s.theta > 0.0)) throw DomainError("relative energy: strong state must be positive");
  if (!(rho >= 0.0) || !(theta > 0.0)) throw DomainError("relative energy: atom needs rho >= 0 and theta > 0");
  const double T = s.theta;
  const ThermoEval v = eval(m, {s.rho, T});
  const double dH = v.e - T * v.s + v.p / s.rho;
  const double kin = rho > 0.0 ? 0.5 * rho * (u - s.u).squaredNorm() : 0.0;
  return kin + H(m, rho, theta, T) - dH * (rho - s.rho) - s.rho * (v.e - T * v.s);
}

double rel_energy_density(const ThermoModel& m, const PhaseAtom& a, const StrongState& s) {
  return rel_energy_density(m, a.rho, a.theta, a.u, s);
}

BregmanReport bregman_equivalence_check(const ThermoModel& m, int samples, std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2)), uu(-2.0, 2.0);
  BregmanReport R;
  R.samples = samples;
  for (int k = 0; k < samples; ++k) {
    Vec u(dim), U(dim);
    const double rho = std::exp(logu(rng)), th = std::exp(logu(rng));
    const double r = std::exp(logu(rng)), T = std::exp(logu(rng));
    for (int a = 0; a < dim; ++a) {
      u[a] = uu(rng);
      U[a] = uu(rng);
    }
    const ConservativeState c = to_conservative(m, {rho, th}, u);
    const ConservativeState ct = to_conservative(m, {r, T}, U);
    const double E = conservative_energy(m, c), Et = conservative_energy(m, ct);
    const ConservativePartials dt = conservative_partials(m, ct);
    const double lin = dt.dE_drho * (c.rho - ct.rho) + dt.dE_dS * (c.S - ct.S) + dt.dE_dm.dot(c.m - ct.m);
    const double B = E - Et - lin;
    const double D = rel_energy_density(m, rho, th, u, {r, T, U});
    const double scale = 1e-12 * (std::abs(E) + std::abs(Et) + std::abs(lin));
    R.max_rel_gap = std::max(R.max_rel_gap, std::abs(B - D) / std::max({std::abs(D), scale, 1e-300}));
    R.min_value = std::min(R.min_value, B);
  }
  return R;
}

double CutoffParams::chi(double rho, double theta) const { return bump(rho, delta) * bump(theta, delta); }

EssRes ess_res_split(double value, const CutoffParams& c, double rho, double theta) {
  const double w = c.chi(rho, theta);
  const double ess = w * value;
  return {ess, value - ess};
}

CoercivityReport coercivity_check(const ThermoModel& m, const CutoffParams& cut, const StrongState& s, long samples,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(std::log(1e-4), std::log(1e4)), unit(0.0, 1.0), uu(-10.0, 10.0);
  const int d = static_cast<int>(s.u.size());
  CoercivityReport R;
  R.samples = samples;
  R.c_found = std::numeric_limits<double>::infinity();
  for (long k = 0; k < samples; ++k) {
    double rho, th;
    Vec u(d);
    // Half the samples cluster near the strong state, where the quadratic form is probed.
    if (k % 2 == 0) {
      const double sc = std::exp(std::log(1e-4) + unit(rng) * std::log(1e4));
      rho = s.rho * (1.0 + sc * (2 * unit(rng) - 1));
      th = s.theta * (1.0 + sc * (2 * unit(rng) - 1));
      for (int a = 0; a < d; ++a) u[a] = s.u[a] + sc * (2 * unit(rng) - 1);
    } else {
      rho = std::exp(logu(rng));
      th = std::exp(logu(rng));
      for (int a = 0; a < d; ++a) u[a] = uu(rng);
    }
    const double E = rel_energy_density(m, rho, th, u, s);
    const double w = cut.chi(rho, th);
    PhaseAtom a;
    a.rho = rho;
    a.theta = th;
    a.u = u;
    const double quad = (rho - s.rho) * (rho - s.rho) + (th - s.theta) * (th - s.theta) + (u - s.u).squaredNorm();
    const double tail = 1.0 + rho + std::abs(entropy_density(m, a)) + internal_energy_density(m, a) +
                        rho * u.squaredNorm();
    const double rhs = w * quad + (1.0 - w) * tail;
    if (!(rhs > 0.0)) continue;
    const double ratio = E / rhs;
    if (!(ratio > 0.0)) {
      if (R.violations == 0) {
        std::ostringstream os;
        os << "rho=" << rho << " theta=" << th << " E=" << E;
        R.witness = os.str();
      }
      ++R.violations;
      continue;
    }
    if (ratio < R.c_found) {
      R.c_found = ratio;
      std::ostringstream os;
      os << "rho=" << rho << " theta=" << th << " |u-U|=" << (u - s.u).norm();
      R.witness = os.str();
    }
  }
  if (R.violations > 0) R.c_found = 0.0;
  return R;
}

double R2Terms::total() const {
  double s = 0;
  for (double v : g) s += v;
  return s;
}

double R2Terms::total_as_printed() const { return total() - g[2] + g3_as_printed; }

R2Terms remainder_R2_atom(const Models& md, const PhaseAtom& a, const StrongPoint& sp) {
  if (!(sp.rho > 0.0)) throw DomainError("R2: strong density must be positive");
  if (!(a.rho > 0.0)) throw DomainError("R2: atoms need rho > 0");
  const ThermoEval v = eval(md.thermo, {a.rho, a.theta});
  const ThermoEval vt = eval(md.thermo, {sp.rho, sp.theta});
  const Vec w = sp.u - a.u;
  const Mat DU = sym_part(sp.grad_u);
  const double divU = sp.grad_u.trace();
  const Vec grad_p = vt.p_rho * sp.grad_rho + vt.p_theta * sp.grad_theta;
  const Vec divS = stress_divergence(sp, md.transport);
  const double DT = sp.theta_t + sp.u.dot(sp.grad_theta);
  const double ds = v.s - vt.s;
  const double dr = sp.rho - a.rho, dth = sp.theta - a.theta;
  R2Terms R;
  R.g[0] = -a.rho * w.dot(DU * w);
  R.g[1] = (a.rho / sp.rho - 1.0) * w.dot(divS + grad_p);
  R.g[2] = a.rho * ds * w.dot(sp.grad_theta);
  R.g3_as_printed = -R.g[2];
  R.g[3] = -(a.rho - sp.rho) * ds * DT;
  R.g[4] = (1.0 - a.rho / sp.rho) * w.dot(grad_p);
  R.g[5] = (vt.p - vt.p_rho * dr - vt.p_theta * dth - v.p) * divU;
  R.g[6] = (vt.s - vt.s_rho * dr - vt.s_theta * dth - v.s) * sp.rho * DT;
  return R;
}

ScalarField remainder_R2(const AtomicYoungMeasure& V, int level, const StrongSolution& s, const Models& md) {
  const Grid& g = V.grid();
  const double t = V.times()[level];
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const StrongPoint sp = s.at(t, g.xc(i), g.yc(j));
      double acc = 0;
      for (const auto& wa : V.cell(level, i, j)) acc += wa.w * remainder_R2_atom(md, wa.a, sp).total();
      out.at(i, j) = acc;
    }
  fill_ghosts(out, GhostKind::Extrapolate);
  return out;
}

R2Smallness r2_smallness(const Models& md, const StrongSolution& s, const Grid& g, double t,
                         const std::vector<double>& eps) {
  if (eps.size() < 2) throw ConfigError("r2_smallness needs at least two eps values");
  const double pi = std::numbers::pi;
  R2Smallness R;
  for (double e : eps) {
    if (!(e > 0.0)) throw ConfigError("r2_smallness needs eps > 0");
    const double I = integrate_fn(g, [&](int i, int j) {
      const double x = g.xc(i), y = g.yc(j);
      const StrongPoint sp = s.at(t, x, y);
      const double px = std::sin(pi * x), cx = std::cos(pi * x);
      const double py = g.dim == 2 ? std::sin(pi * y) : 1.0;
      PhaseAtom a;
      a.rho = sp.rho * (1.0 + e * (0.5 + 0.3 * cx));
      a.theta = sp.theta * (1.0 - e * (0.4 + 0.2 * px * py));
      a.u = sp.u;
      for (int k = 0; k < a.u.size(); ++k) a.u[k] += e * (k + 1) * px * py;
      a.D_u = sym_part(sp.grad_u);
      a.D_theta = sp.grad_theta;
      return remainder_R2_atom(md, a, sp).total();
    });
    R.eps.push_back(e);
    R.integral.push_back(std::abs(I));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(eps.size());
  for (size_t k = 0; k < eps.size(); ++k) {
    const double x = std::log(R.eps[k]), y = std::log(R.integral[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  R.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return R;
}

DissipationBlocks dissipation_blocks(const Models& md, const PhaseAtom& a, const StrongPoint& sp) {
  const Coefficients c = coefficients(md.transport, a.rho, a.theta);
  const Coefficients ct = coefficients(md.transport, sp.rho, sp.theta);
  const double th = a.theta, T = sp.theta;
  const double q = th / T;
  const Mat D0U = traceless(sym_part(sp.grad_u));
  const Mat D0u = traceless(a.D_u);
  const double divU = sp.grad_u.trace();
  const Mat dev = D0u - q * D0U;
  const double tr = a.D_u.trace() - q * divU;
  const Vec gT = sp.grad_theta / T;
  const Vec gap = gT - a.D_theta / th;
  DissipationBlocks B;
  B.mu_quad = c.mu / q * dev.squaredNorm();
  B.mu_coupling = (c.mu - ct.mu) * ddot(D0U, dev);
  B.lambda_quad = c.lambda / q * tr * tr;
  B.lambda_coupling = divU * (c.lambda - ct.lambda) * tr;
  B.kappa_quad = T * c.kappa * gap.squaredNorm();
  B.kappa_coupling = ct.kappa * (th - T) * gT.dot(gap);
  B.kappa_difference = -(c.kappa - ct.kappa) * sp.grad_theta.dot(gap);
  return B;
}

std::vector<double> rel_energy_series(const AtomicYoungMeasure& V, const StrongSolution& s, const ThermoModel& m) {
  const Grid& g = V.grid();
  std::vector<double> out;
  for (int l = 0; l < V.levels(); ++l) {
    const double t = V.times()[l];
    out.push_back(integrate_fn(g, [&](int i, int j) {
      const StrongState ss = state_of(s.at(t, g.xc(i), g.yc(j)));
      double acc = 0;
      for (const auto& wa : V.cell(l, i, j)) acc += wa.w * rel_energy_density(m, wa.a, ss);
      return acc;
    }));
  }
  return out;
}

RelEnergyReport rel_energy_inequality_report(const MVProblem& P, const StrongSolution& s, const CutoffParams& cut) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  const int L = V.levels();
  const double vol = g.volume();
  RelEnergyReport R;
  R.forced = s.forced;
  std::vector<double> blocks(L), r2(L), r2p(L), pair(L);
  for (int l = 0; l < L; ++l) {
    const double t = ts[l];
    RelEnergyLevel lv;
    lv.t = t;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const StrongPoint sp = s.at(t, g.xc(i), g.yc(j));
        const StrongState ss = state_of(sp);
        const ThermoEval vt = eval(P.models.thermo, {sp.rho, sp.theta});
        const double dH = vt.e - sp.theta * vt.s + vt.p / sp.rho;
        const int k = i + g.nx * j;
        lv.rM_pairing += ddot(P.rM[l][k], sp.grad_u) * vol;
        lv.L[3] += vt.p * vol;
        for (const auto& wa : V.cell(l, i, j)) {
          const PhaseAtom& a = wa.a;
          const double w = wa.w * vol;
          const double E = rel_energy_density(P.models.thermo, a, ss);
          const EssRes er = ess_res_split(E, cut, a.rho, a.theta);
          lv.E += w * E;
          lv.E_ess += w * er.ess;
          lv.E_res += w * er.res;
          lv.L[0] += w * (kinetic_density(a) + H(P.models.thermo, a.rho, a.theta, sp.theta));
          lv.L[1] -= w * a.rho * a.u.dot(sp.u);
          lv.L[2] += w * a.rho * (0.5 * sp.u.squaredNorm() - dH);
          const DissipationBlocks b = dissipation_blocks(P.models, a, sp);
          lv.blocks.mu_quad += w * b.mu_quad;
          lv.blocks.mu_coupling += w * b.mu_coupling;
          lv.blocks.lambda_quad += w * b.lambda_quad;
          lv.blocks.lambda_coupling += w * b.lambda_coupling;
          lv.blocks.kappa_quad += w * b.kappa_quad;
          lv.blocks.kappa_coupling += w * b.kappa_coupling;
          lv.blocks.kappa_difference += w * b.kappa_difference;
          const R2Terms rt = remainder_R2_atom(P.models, a, sp);
          lv.R2 += w * rt.total();
          lv.R2_as_printed += w * rt.total_as_printed();
          double p_abs = 0;
          if (a.rho > 0.0) p_abs = std::abs(eval(P.models.thermo, {a.rho, a.theta}).p);
          const double tail = a.theta + p_abs + (a.u - sp.u).norm() + std::abs(entropy_density(P.models.thermo, a)) * a.u.norm();
          lv.tail += w * ess_res_split(tail, cut, a.rho, a.theta).res;
        }
      }
    lv.defect = P.defect[l];
    blocks[l] = lv.blocks.sum();
    r2[l] = lv.R2;
    r2p[l] = lv.R2_as_printed;
    pair[l] = lv.rM_pairing;
    R.levels.push_back(lv);
  }
  R.min_slack = std::numeric_limits<double>::infinity();
  for (int l = 0; l < L; ++l) {
    RelEnergyLevel& lv = R.levels[l];
    lv.lhs = lv.E + time_integral(ts, blocks, l) + lv.defect;
    lv.rhs = R.levels[0].E - time_integral(ts, pair, l) + time_integral(ts, r2, l);
    lv.slack = lv.rhs - lv.lhs;
    lv.slack_as_printed = R.levels[0].E + time_integral(ts, pair, l) + time_integral(ts, r2p, l) - lv.lhs;
    if (l > 0) R.min_slack = std::min(R.min_slack, lv.slack);
  }
  if (L == 1) R.min_slack = 0.0;
  std::vector<double> E;
  for (const auto& lv : R.levels) E.push_back(lv.E);
  if (!E.empty() && E.front() > 0.0) R.gronwall_C = fit_gronwall(ts, E).C;
  return R;
}

GronwallFit fit_gronwall(const std::vector<double>& t, const std::vector<double>& E, double factor) {
  GronwallFit F;
  if (t.size() != E.size() || t.size() < 2) throw DomainError("Gronwall fit needs at least two samples");
  if (!(E.front() > 0.0)) throw DomainError("Gronwall fit needs E(0) > 0");
  double num = 0, den = 0;
  for (size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t.front();
    if (!(E[k] > 0.0)) continue;
    num += dt * std::log(E[k] / E.front());
    den += dt * dt;
  }
  F.C = den > 0.0 ? num / den : 0.0;
  for (size_t k = 0; k < t.size(); ++k)
    F.max_ratio = std::max(F.max_ratio, E[k] / (std::exp(F.C * (t[k] - t.front())) * E.front()));
  F.ok = F.max_ratio <= factor;
  return F;
}

}  // namespace nsf
