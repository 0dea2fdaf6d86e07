#include "nsf/apriori.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

const std::array<const char*, kAprioriTerms> kAprioriTermNames{
    "mass", "kinetic", "internal", "entropy_power", "viscous", "bulk", "conduction"};

namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double s = 0;
  for (size_t k = 1; k < t.size(); ++k) s += 0.5 * (t[k] - t[k - 1]) * (v[k] + v[k - 1]);
  return s;
}

Grid make_grid(int dim, int n) { return dim == 1 ? Grid::line(n) : Grid::rect(n, n); }

BoundaryData wall(const AprioriSpec& s, double factor) {
  return BoundaryData::affine(factor * s.theta_B, factor * s.theta_B * s.theta_B_slope);
}

Trajectory run(const AprioriSpec& s, const Models& md, int n, double factor) {
  const Grid g = make_grid(s.dim, n);
  const BoundaryData bd = wall(s, factor);
  FieldSet init = decay_initial(g, s.rho0, 1.0, s.amp_u, s.amp_theta);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) init.theta.at(i, j) *= bd.theta_B(0.0, g.xc(i), g.yc(j));
  sync_ghosts(init, bd, 0.0);
  SolverConfig cfg;
  cfg.t_end = s.t_end;
  cfg.snapshot_dt = s.t_end / s.frames;
  return simulate(init, cfg, md, bd);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

AprioriSpec AprioriSpec::defaults() {
  AprioriSpec s;
  s.thermo.kind = "molecular_radiation";
  s.thermo.kernel = "log_tail";
  s.thermo.pbar = 1.0;
  s.thermo.a = 0.1;
  s.transport.kind = "power_kappa";
  s.transport.mu0 = s.transport.mu1 = s.transport.lambda0 = s.transport.lambda1 = s.transport.kappa1 = 0.1;
  s.transport.kappa2 = 0.05;
  s.transport.beta = 3.0;
  s.transport.uniqueness_mode = false;
  s.envelope.mu_lo = 0.09;
  s.envelope.kappa_lo = 0.045;
  s.envelope.beta = 3.0;
  return s;
}

double calibrate_absorption(const ThermoModel& m, double T_lo, double T_hi) {
  constexpr int n = 121;
  const double lo = std::log(1e-4), hi = std::log(1e4);
  double c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double rho = std::exp(lo + (hi - lo) * i / (n - 1));
      const double th = std::exp(lo + (hi - lo) * j / (n - 1));
      const ThermoEval v = eval(m, {rho, th});
      for (double T : {T_lo, 0.5 * (T_lo + T_hi), T_hi})
        c = std::max(c, (0.5 * m.a * th * th - (rho * v.e - T * rho * v.s)) / (1.0 + rho));
    }
  return c;
}

AprioriLevel apriori_terms(const Trajectory& tr, const AprioriSpec& spec, const TransportEnvelope& env,
                           double entropy_c, double absorption_c) {
  const Grid& g = tr.grid();
  const Models& md = tr.models;
  const int d = g.dim;
  const double vol = g.volume();
  const HarmonicResult hat = harmonic_extension(g, tr.boundary, 0.0);
  const VectorField grad_hat = gradient(hat.theta);
  double grad_hat_sup = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) grad_hat_sup = std::max(grad_hat_sup, grad_hat.at(i, j).norm());

  AprioriLevel L;
  L.n = g.nx;
  L.h = g.min_h();
  std::vector<double> ts, visc, bulk, cond;
  for (const FieldSet& f0 : tr.frames) {
    FieldSet f = f0;
    sync_ghosts(f, tr.boundary, f.t);
    const TensorField Gu = grad_vector(f.u);
    const VectorField Gt = gradient(f.theta);
    double mass = 0, kin = 0, inner = 0, ent = 0, v = 0, b = 0, c = 0;
    double transport = 0, rs2 = 0, absorb_l = 0, absorb_r = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double rho = f.rho(i, j), th = f.theta(i, j);
        const Vec u = f.u.at(i, j);
        const ThermoEval ev = eval(md.thermo, {rho, th});
        const Coefficients co = coefficients(md.transport, rho, th);
        const Mat D = sym_part(Gu.at(i, j));
        const double divu = D.trace();
        const Mat dev = 2.0 * (D - (divu / d) * Mat::Identity(d, d));
        const double gt2 = Gt.at(i, j).squaredNorm();
        mass += rho;
        kin += rho * u.squaredNorm();
        inner += rho * ev.e;
        ent += std::pow(std::abs(rho * ev.s), spec.q);
        v += env.mu_lo * (1.0 + 1.0 / th) * dev.squaredNorm();
        b += co.lambda / (2.0 * th) * divu * divu;
        c += env.kappa_lo * (1.0 / (th * th) + std::pow(th, md.transport.beta - 2.0)) * gt2;
        const EntropyBound eb = entropy_growth_bound(md.thermo, {rho, th}, entropy_c);
        L.entropy_bound_ratio = std::max(L.entropy_bound_ratio, eb.lhs / eb.rhs);
        transport += rho * ev.s * u.dot(grad_hat.at(i, j));
        rs2 += rho * ev.s * ev.s + rho * u.squaredNorm();
        absorb_l += 0.5 * md.thermo.a * th * th;
        absorb_r += rho * ev.e - hat.theta(i, j) * rho * ev.s + absorption_c * (1.0 + rho);
      }
    const std::array<double, 4> sup{mass * vol, kin * vol, inner * vol, ent * vol};
    for (int k = 0; k < 4; ++k) L.terms[k] = std::max(L.terms[k], sup[k]);
    ts.push_back(f.t);
    visc.push_back(v * vol);
    bulk.push_back(b * vol);
    cond.push_back(c * vol);
    const double tr_bound = 0.5 * grad_hat_sup * rs2 * vol;
    if (tr_bound > 0) L.transport_ratio = std::max(L.transport_ratio, std::abs(transport * vol) / tr_bound);
    L.absorption_ratio = std::max(L.absorption_ratio, absorb_l / absorb_r);
  }
  L.terms[4] = trapezoid(ts, visc);
  L.terms[5] = trapezoid(ts, bulk);
  L.terms[6] = trapezoid(ts, cond);
  return L;
}

AprioriReport run_apriori(const AprioriSpec& spec) {
  AprioriReport R;
  const ThermoModel thermo = make_thermo(spec.thermo);
  if (thermo.kind != EosKind::MolecularRadiation) throw GateError("the a priori estimate needs molecular_radiation");
  TransportSpec ts = spec.transport;
  ts.uniqueness_mode = false;
  const Models md{thermo, make_transport(ts)};
  const EnvelopeReport er = check_envelope(md.transport, spec.envelope);
  R.envelope_ok = er.pass;
  if (!er.pass) {
    std::ostringstream os;
    os << "transport law outside the admissible envelope: " << er.first_violation << " at theta=" << er.witness_theta;
    throw GateError(os.str());
  }
  if (!(spec.envelope.beta >= 2.0)) throw GateError("the a priori envelope requires beta >= 2");

  // Maximum principle for the harmonic extension on every grid used.
  R.max_principle_exact = true;
  std::vector<int> all = spec.grids;
  all.push_back(spec.calibration_grid);
  double bmin = std::numeric_limits<double>::infinity(), bmax = 0;
  for (int n : all) {
    const Grid g = make_grid(spec.dim, n);
    const HarmonicResult h = harmonic_extension(g, wall(spec, 1.0), 0.0);
    R.max_principle_raw_violation = std::max(R.max_principle_raw_violation, h.raw_violation);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (h.theta(i, j) < h.bmin || h.theta(i, j) > h.bmax) R.max_principle_exact = false;
    bmin = std::min(bmin, h.bmin);
    bmax = std::max(bmax, h.bmax);
  }
  if (!R.max_principle_exact) R.failures.push_back("harmonic extension leaves [min theta_B, max theta_B]");

  R.entropy_c = calibrate_entropy_bound(thermo, 1e-3, 1e3, 121);
  R.absorption_c = calibrate_absorption(thermo, bmin, bmax);

  R.calibration = apriori_terms(run(spec, md, spec.calibration_grid, 1.0), spec, spec.envelope, R.entropy_c,
                                R.absorption_c);
  // The absolute floor keeps round-off-level terms (equilibrium dissipation) comparable.
  for (int k = 0; k < kAprioriTerms; ++k) R.C[k] = spec.safety * R.calibration.terms[k] + 1e-12;

  auto exceeds = [&](const AprioriLevel& L, double factor) {
    double worst = 0;
    for (int k = 0; k < kAprioriTerms; ++k) {
      worst = std::max(worst, L.terms[k] / R.C[k]);
      if (L.terms[k] > factor * R.C[k]) {
        std::ostringstream os;
        os << "a priori term '" << kAprioriTermNames[k] << "' blew up: " << L.terms[k];
        throw SolverError(os.str());
      }
    }
    return worst;
  };

  bool ok = R.max_principle_exact;
  for (int n : spec.grids) {
    const AprioriLevel L = apriori_terms(run(spec, md, n, 1.0), spec, spec.envelope, R.entropy_c, R.absorption_c);
    exceeds(L, 1e6);
    for (int k = 0; k < kAprioriTerms; ++k)
      if (!(L.terms[k] <= R.C[k])) {
        ok = false;
        R.failures.push_back(std::string("term '") + kAprioriTermNames[k] + "' = " + fmt(L.terms[k]) + " exceeds C = " +
                             fmt(R.C[k]) + " at n=" + std::to_string(n));
      }
    if (!(L.entropy_bound_ratio <= 1.0 + 1e-12)) {
      ok = false;
      R.failures.push_back("entropy growth bound fails at n=" + std::to_string(n));
    }
    if (!(L.transport_ratio <= 1.0)) {
      ok = false;
      R.failures.push_back("entropy transport term exceeds its bound at n=" + std::to_string(n));
    }
    if (!(L.absorption_ratio <= 1.0)) {
      ok = false;
      R.failures.push_back("theta^2 absorption fails at n=" + std::to_string(n));
    }
    R.levels.push_back(L);
  }
  if (!R.levels.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& L : R.levels) {
      lo = std::min(lo, L.terms[6]);
      hi = std::max(hi, L.terms[6]);
    }
    R.conduction_spread = hi > 1e-12 ? (hi - lo) / hi : 0.0;
    if (!(R.conduction_spread <= 0.05)) {
      ok = false;
      R.failures.push_back("conduction block not grid-stable: spread " + fmt(R.conduction_spread));
    }
  }

  if (spec.probe_recalibration) {
    const AprioriLevel L = apriori_terms(run(spec, md, spec.calibration_grid, 2.0), spec, spec.envelope,
                                         R.entropy_c, calibrate_absorption(thermo, 2.0 * bmin, 2.0 * bmax));
    R.recalibration_ratio = exceeds(L, std::numeric_limits<double>::infinity());
    R.recalibration_detected = R.recalibration_ratio > 1.0;
    if (!R.recalibration_detected) {
      ok = false;
      R.failures.push_back("doubling theta_B stayed within C(theta_B); the bound is not sensitive to boundary data");
    }
  }
  R.pass = ok;
  return R;
}

}  // namespace nsf
