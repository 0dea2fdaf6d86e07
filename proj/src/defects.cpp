#include "nsf/defects.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_compatible(const Grid& fine, const Grid& coarse) {
  const bool same_box = fine.dim == coarse.dim && fine.x0 == coarse.x0 && fine.x1 == coarse.x1 &&
                        (fine.dim == 1 || (fine.y0 == coarse.y0 && fine.y1 == coarse.y1));
  const bool nested = fine.nx % coarse.nx == 0 && fine.ny % coarse.ny == 0;
  if (!same_box || !nested) {
    std::ostringstream os;
    os << "incompatible grids: " << fine.nx << "x" << fine.ny << " does not refine " << coarse.nx << "x" << coarse.ny;
    throw ConfigError(os.str());
  }
}

DefectLevel coarse_grain(const FieldSet& f, const Grid& c, const ThermoModel& m, const std::vector<ThetaFn>& Thetas) {
  const Grid& g = f.grid();
  require_compatible(g, c);
  const int rx = g.nx / c.nx, ry = g.ny / c.ny;
  const double w = 1.0 / (rx * ry);
  const int d = g.dim;
  DefectLevel L;
  L.fine_n = g.nx;
  L.D.assign(Thetas.size(), 0.0);
  L.coarse_state = FieldSet(c);
  L.rM.assign(c.cells(), Mat::Zero(d, d));
  for (int J = 0; J < c.ny; ++J)
    for (int I = 0; I < c.nx; ++I) {
      double rho = 0, th = 0, kin = 0, re = 0, rs = 0, rs_abs = 0;
      Vec mom = Vec::Zero(d);
      Mat flux = Mat::Zero(d, d);
      for (int j = J * ry; j < (J + 1) * ry; ++j)
        for (int i = I * rx; i < (I + 1) * rx; ++i) {
          const double r = f.rho(i, j), t = f.theta(i, j);
          const Vec u = f.u.at(i, j);
          const ThermoEval v = eval(m, {r, t});
          rho += w * r;
          th += w * t;
          mom += w * r * u;
          kin += w * 0.5 * r * u.squaredNorm();
          re += w * r * v.e;
          rs += w * r * v.s;
          rs_abs += w * std::abs(r * v.s);
          flux += w * (r * u * u.transpose() + v.p * Mat::Identity(d, d));
        }
      const Vec ub = mom / rho;
      const ThermoEval vb = eval(m, {rho, th});
      L.coarse_state.rho.at(I, J) = rho;
      L.coarse_state.theta.at(I, J) = th;
      L.coarse_state.u.set(I, J, ub);
      const double vol = c.volume();
      const double dk = kin - 0.5 * rho * ub.squaredNorm();
      const double de = re - rho * vb.e;
      const double ds = rs - rho * vb.s;
      L.kinetic += dk * vol;
      L.internal += de * vol;
      L.entropy += ds * vol;
      L.entropy_abs += rs_abs * vol;
      L.energy += (kin + re) * vol;
      for (size_t k = 0; k < Thetas.size(); ++k) L.D[k] += (dk + de - Thetas[k](c.xc(I), c.yc(J)) * ds) * vol;
      Mat& r = L.rM[I + c.nx * J];
      r = flux - (rho * ub * ub.transpose() + vb.p * Mat::Identity(d, d));
      L.rM_L1 += r.norm() * vol;
    }
  double lo = L.D.empty() ? 0 : L.D.front(), hi = lo, scale = 0;
  for (double x : L.D) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    scale = std::max(scale, std::abs(x));
  }
  L.spread = scale > 0 ? (hi - lo) / scale : 0.0;
  return L;
}

FieldSet oscillatory_member(const Grid& g, const DefectStudySpec& s, double eps) {
  FieldSet f(g);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.xc(i);
    f.rho.at(i) = s.rho0;
    f.theta.at(i) = s.theta0 * (1.0 + s.theta_amp * std::sin(kPi * x));
    f.u.c[0].at(i) = eps > 0 ? std::sin(x / eps) * s.envelope * std::sin(kPi * x) : s.envelope * std::sin(kPi * x);
  }
  return f;
}

}  // namespace

DefectEstimate defect_from_refinement(const std::vector<FieldSet>& family, const Grid& coarse, const ThermoModel& m,
                                      const std::vector<ThetaFn>& Thetas) {
  if (family.size() < 2) throw ConfigError("defect_from_refinement needs at least two refinement levels");
  if (Thetas.empty()) throw ConfigError("defect_from_refinement needs at least one Theta");
  DefectEstimate E;
  E.coarse = coarse;
  for (const auto& f : family) E.levels.push_back(coarse_grain(f, coarse, m, Thetas));
  return E;
}

double sin2_period_mean(int samples) {
  double s = 0;
  for (int k = 0; k < samples; ++k) {
    const double v = std::sin(2.0 * kPi * (k + 0.5) / samples);
    s += v * v;
  }
  return s / samples;
}

DefectStudyReport run_defect_study(const DefectStudySpec& spec) {
  DefectStudyReport R;
  const ThermoModel m = make_thermo(spec.thermo);
  const double T0 = spec.theta0;
  const std::vector<ThetaFn> Thetas{
      [T0](double, double) { return T0; },
      [T0](double x, double) { return T0 * (1.0 + 0.5 * std::sin(kPi * x)); },
      [T0](double x, double) { return T0 * (1.0 + 0.3 * std::sin(kPi * x) + 0.3 * std::sin(2.0 * kPi * x)); }};

  // Oscillatory family: the period shrinks with the fine grid.
  std::vector<FieldSet> family;
  for (int n : spec.fine) {
    const Grid g = Grid::line(n);
    const double eps = spec.cells_per_period * g.hx / (2.0 * kPi);
    family.push_back(oscillatory_member(g, spec, eps));
  }
  const Grid coarse = Grid::line(spec.coarse);
  R.oscillatory = defect_from_refinement(family, coarse, m, Thetas);
  const DefectLevel& fin = R.oscillatory.levels.back();

  // Reference: int rho env^2 / 2 times the period mean of sin^2.
  R.sin2_mean = sin2_period_mean(1 << 20);
  {
    constexpr int n = 1 << 16;
    double s = 0;
    for (int k = 0; k < n; ++k) {
      const double x = (k + 0.5) / n;
      const double env = spec.envelope * std::sin(kPi * x);
      s += 0.5 * spec.rho0 * env * env;
    }
    R.kinetic_reference = R.sin2_mean * s / n;
  }
  R.kinetic_rel_error = std::abs(fin.kinetic - R.kinetic_reference) / R.kinetic_reference;
  R.spread = fin.spread;
  R.entropy_rel = fin.entropy_abs > 0 ? std::abs(fin.entropy) / fin.entropy_abs : 0.0;
  double emin = fin.energy, emax = fin.energy;
  for (const auto& L : R.oscillatory.levels) {
    emin = std::min(emin, L.energy);
    emax = std::max(emax, L.energy);
  }
  R.energy_ratio = emax / emin;

  // Defect compatibility on the coarse-grained Dirac measure.
  AtomicYoungMeasure V = dirac_from_frames({[&] {
    FieldSet c = fin.coarse_state;
    sync_ghosts(c, BoundaryData::constant(T0), 0.0);
    return c;
  }()});
  const Models md{m, TransportModel::affine_theta(0.1, 0.1, 0.1)};
  MVProblem P = prepare(V, md);
  const double D = *std::min_element(fin.D.begin(), fin.D.end());
  R.bundle.rM = {fin.rM};
  R.bundle.D = {std::max(D, 0.0)};
  R.bundle.xi = {D > 0 ? fin.rM_L1 / D : 0.0};
  attach(P, R.bundle);
  R.compat = defect_compat_check(P, R.bundle.xi, make_test_functions(coarse, 4).dirichlet);

  // Smooth family: the same refinements coarse-grained on refining coarse grids.
  std::vector<FieldSet> smooth;
  for (int n : spec.fine) smooth.push_back(oscillatory_member(Grid::line(n), spec, 0.0));
  for (int nc : spec.smooth_coarse) {
    R.smooth.push_back(defect_from_refinement(smooth, Grid::line(nc), m, Thetas));
    R.smooth_D.push_back(R.smooth.back().levels.back().D.front());
  }
  if (R.smooth_D.size() >= 2) {
    const double a = R.smooth_D[R.smooth_D.size() - 2], b = R.smooth_D.back();
    const double ha = 1.0 / spec.smooth_coarse[spec.smooth_coarse.size() - 2], hb = 1.0 / spec.smooth_coarse.back();
    R.smooth_order = std::log(a / b) / std::log(ha / hb);
  }

  bool ok = true;
  auto fail = [&](const std::string& msg) {
    ok = false;
    R.failures.push_back(msg);
  };
  for (const auto& L : R.oscillatory.levels)
    for (double d : L.D)
      if (!(d >= 0.0)) fail("negative dissipation defect " + fmt(d) + " at fine n=" + std::to_string(L.fine_n));
  if (!(R.kinetic_rel_error <= spec.kinetic_tolerance))
    fail("kinetic defect " + fmt(fin.kinetic) + " misses the period average " + fmt(R.kinetic_reference));
  if (!(R.spread <= spec.spread_tolerance)) fail("Theta spread of the defect " + fmt(R.spread));
  if (!(R.entropy_rel <= spec.entropy_tolerance)) fail("entropy shows a defect: relative gap " + fmt(R.entropy_rel));
  if (!(R.energy_ratio <= 2.0)) fail("family energies are not uniformly bounded: ratio " + fmt(R.energy_ratio));
  if (!R.compat.ok) fail("defect compatibility fails: ratio " + fmt(R.compat.max_ratio));
  for (size_t k = 1; k < R.smooth_D.size(); ++k)
    if (!(R.smooth_D[k] < R.smooth_D[k - 1])) fail("smooth-family defect does not decrease under refinement");
  if (!(R.smooth_order >= 1.0)) fail("smooth-family defect order " + fmt(R.smooth_order) + " < 1");
  R.pass = ok;
  return R;
}

}  // namespace nsf
