#include "nsf/solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

ForcingFn forcing_of(const StrongSolution& s, const Models& m) {
  if (!s.forced) return {};
  auto at = s.at;
  const Models mm = m;
  return [at, mm](double t, double x, double y) { return forcing(at(t, x, y), mm.thermo, mm.transport); };
}

double sound_speed(const ThermoModel& m, ThermoState st) {
  const ThermoEval v = eval(m, st);
  return std::sqrt(v.p_rho + st.theta * v.p_theta * v.p_theta / (st.rho * st.rho * v.e_theta));
}

namespace {

struct CellData {
  std::vector<double> p, e, K;
  std::vector<Coefficients> c;
};

CellData cell_data(const FieldSet& s, const Models& m) {
  const Grid& g = s.grid();
  CellData cd;
  const int n = g.padded_size();
  cd.p.assign(n, 0.0);
  cd.e.assign(n, 0.0);
  cd.K.assign(n, 0.0);
  cd.c.assign(n, Coefficients{});
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      const ThermoState st{s.rho(i, j), s.theta(i, j)};
      const ThermoEval v = eval(m.thermo, st);
      cd.p[k] = v.p;
      cd.e[k] = v.e;
      cd.K[k] = kappa_integral(m.transport, st.theta);
      cd.c[k] = coefficients(m.transport, st.rho, st.theta);
    }
  return cd;
}

// Limited slope; the eps term keeps smooth extrema second order.
double van_albada(double a, double b, double eps) {
  if (a * b <= 0.0 && a * a + b * b > eps) return 0.0;
  return (a * (b * b + eps) + b * (a * a + eps)) / (a * a + b * b + 2.0 * eps);
}

}  // namespace

Tendency rhs(const FieldSet& s, const Models& m, const BoundaryData& bd, const ForcingFn& f) {
  const Grid& g = s.grid();
  const int d = g.dim;
  if (!s.rho.synced() || !s.theta.synced()) throw StaleGhostError("rhs: ghost layer is stale");
  const CellData cd = cell_data(s, m);
  const TensorField G = grad_vector(s.u);

  Tendency T{ScalarField(g), VectorField(g, d), ScalarField(g)};
  auto add = [&](int i, int j, double sgn, double fm, const Vec& fmom, double fe, double h) {
    T.rho.at(i, j) += sgn * fm / h;
    for (int b = 0; b < d; ++b) T.m.c[b].at(i, j) += sgn * fmom[b] / h;
    T.rho_e.at(i, j) += sgn * fe / h;
  };

  for (int a = 0; a < d; ++a) {
    const double h = g.h(a);
    const int n = g.n(a);
    const int lines = a == 0 ? g.ny : g.nx;
    for (int l = 0; l < lines; ++l) {
      auto cell = [&](int k) { return a == 0 ? std::pair{k, l} : std::pair{l, k}; };
      for (int k = 0; k <= n; ++k) {
        double fmass = 0, fe = 0;
        Vec fmom = Vec::Zero(d);
        Mat Gf = Mat::Zero(d, d);
        double theta_f, rho_f, p_f;
        if (k == 0 || k == n) {
          const bool left = k == 0;
          const auto [i0, j0] = cell(left ? 0 : n - 1);
          const auto [i1, j1] = cell(left ? 1 : n - 2);
          const int k0 = g.idx(i0, j0), k1 = g.idx(i1, j1);
          double xf = g.xc(i0), yf = g.yc(j0);
          if (a == 0) xf = left ? g.x0 : g.x1;
          else yf = left ? g.y0 : g.y1;
          theta_f = bd.theta_B(s.t, xf, yf);
          rho_f = s.rho(i0, j0);
          p_f = 0.5 * (3.0 * cd.p[k0] - cd.p[k1]);
          const double sgn = left ? 1.0 : -1.0;
          for (int b = 0; b < d; ++b) Gf(b, a) = sgn * s.u.c[b](i0, j0) / (0.5 * h);
          const double KB = kappa_integral(m.transport, theta_f);
          fe = left ? -(cd.K[k0] - KB) / (0.5 * h) : -(KB - cd.K[k0]) / (0.5 * h);
        } else {
          const auto [iL, jL] = cell(k - 1);
          const auto [iR, jR] = cell(k);
          const int kL = g.idx(iL, jL), kR = g.idx(iR, jR);
          const double un = 0.5 * (s.u.c[a](iL, jL) + s.u.c[a](iR, jR));
          const bool fromL = un >= 0.0;
          const int ku = fromL ? k - 1 : k;
          const int kd = fromL ? k : k - 1;
          const int kf = fromL ? k - 2 : k + 1;  // far upwind cell
          const auto [iu, ju] = cell(ku);
          const auto [id, jd] = cell(kd);
          const bool second = kf >= 0 && kf < n;
          const auto [ifar, jfar] = cell(second ? kf : ku);
          auto face = [&](double vu, double vd, double vf) {
            return second ? vu + 0.5 * van_albada(vu - vf, vd - vu, h * h * h) : vu;
          };
          fmass = un * face(s.rho(iu, ju), s.rho(id, jd), s.rho(ifar, jfar));
          for (int b = 0; b < d; ++b)
            fmom[b] = fmass * face(s.u.c[b](iu, ju), s.u.c[b](id, jd), s.u.c[b](ifar, jfar));
          fe = fmass * face(cd.e[g.idx(iu, ju)], cd.e[g.idx(id, jd)], cd.e[g.idx(ifar, jfar)]) -
               (cd.K[kR] - cd.K[kL]) / h;
          p_f = 0.5 * (cd.p[kL] + cd.p[kR]);
          theta_f = 0.5 * (s.theta(iL, jL) + s.theta(iR, jR));
          rho_f = 0.5 * (s.rho(iL, jL) + s.rho(iR, jR));
          for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
              Gf(b, c) = c == a ? (s.u.c[b](iR, jR) - s.u.c[b](iL, jL)) / h
                                : 0.5 * (G(b, c)(iL, jL) + G(b, c)(iR, jR));
        }
        const Mat S = viscous_stress(m.transport, {rho_f, theta_f}, Gf);
        fmom[a] += p_f;
        for (int b = 0; b < d; ++b) fmom[b] -= S(a, b);
        if (k > 0) {
          const auto [i, j] = cell(k - 1);
          add(i, j, -1.0, fmass, fmom, fe, h);
        }
        if (k < n) {
          const auto [i, j] = cell(k);
          add(i, j, 1.0, fmass, fmom, fe, h);
        }
      }
    }
  }

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      const Mat Gc = G.at(i, j);
      const Mat S = viscous_stress_sym(cd.c[k], Gc);
      T.rho_e.at(i, j) += ddot(S, Gc) - cd.p[k] * Gc.trace();
      if (f) {
        const Forcing F = f(s.t, g.xc(i), g.yc(j));
        T.rho.at(i, j) += F.F_rho;
        for (int b = 0; b < d; ++b) T.m.c[b].at(i, j) += F.F_m[b];
        T.rho_e.at(i, j) += F.F_E;
      }
    }
  return T;
}

double stable_dt(const FieldSet& s, const Models& m, double cfl) {
  const Grid& g = s.grid();
  double wave = 0, nu = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const ThermoState st{s.rho(i, j), s.theta(i, j)};
      const ThermoEval v = eval(m.thermo, st);
      const Coefficients c = coefficients(m.transport, st.rho, st.theta);
      const double cs = std::sqrt(v.p_rho + st.theta * v.p_theta * v.p_theta / (st.rho * st.rho * v.e_theta));
      wave = std::max(wave, s.u.at(i, j).norm() + cs);
      nu = std::max({nu, (c.mu + c.lambda) / st.rho, c.kappa / (st.rho * v.e_theta)});
    }
  const double h = g.min_h();
  double dt = h / wave;
  if (nu > 0) dt = std::min(dt, h * h / (2.0 * nu));
  return cfl * dt;
}

namespace {

struct Conserved {
  ScalarField rho;
  VectorField m;
  ScalarField rho_e;
};

Conserved to_conserved(const FieldSet& s, const Models& md) {
  const Grid& g = s.grid();
  Conserved c{ScalarField(g), VectorField(g, g.dim), ScalarField(g)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double r = s.rho(i, j);
      c.rho.at(i, j) = r;
      for (int b = 0; b < g.dim; ++b) c.m.c[b].at(i, j) = r * s.u.c[b](i, j);
      c.rho_e.at(i, j) = r * eval(md.thermo, {r, s.theta(i, j)}).e;
    }
  return c;
}

// Returns false on a positivity breach.
bool to_primitive(const Conserved& c, const Models& md, const BoundaryData& bd, double t, double floor,
                  FieldSet& out) {
  const Grid& g = c.rho.grid();
  out = FieldSet(g);
  out.t = t;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double r = c.rho(i, j);
      if (!(r > floor) || !std::isfinite(r)) return false;
      double th;
      try {
        th = temperature_from_internal_energy(md.thermo, r, c.rho_e(i, j));
      } catch (const InversionError&) {
        return false;
      }
      if (!(th > floor) || !std::isfinite(th)) return false;
      out.rho.at(i, j) = r;
      out.theta.at(i, j) = th;
      for (int b = 0; b < g.dim; ++b) out.u.c[b].at(i, j) = c.m.c[b](i, j) / r;
    }
  sync_ghosts(out, bd, t);
  return true;
}

void axpy(ScalarField& y, double a, const ScalarField& x, double b, const ScalarField& z) {
  const Grid& g = y.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) y.at(i, j) = a * x(i, j) + b * z(i, j);
}

bool try_step(const FieldSet& s, double dt, const SolverConfig& cfg, const Models& md, const BoundaryData& bd,
              const ForcingFn& f, FieldSet& out) {
  const Grid& g = s.grid();
  const Conserved U0 = to_conserved(s, md);
  const Tendency L0 = rhs(s, md, bd, f);
  Conserved U1 = U0;
  axpy(U1.rho, 1.0, U0.rho, dt, L0.rho);
  for (int b = 0; b < g.dim; ++b) axpy(U1.m.c[b], 1.0, U0.m.c[b], dt, L0.m.c[b]);
  axpy(U1.rho_e, 1.0, U0.rho_e, dt, L0.rho_e);
  FieldSet s1;
  if (!to_primitive(U1, md, bd, s.t + dt, cfg.floor, s1)) return false;
  const Tendency L1 = rhs(s1, md, bd, f);
  Conserved U2 = U0;
  auto stage2 = [&](ScalarField& y, const ScalarField& u0, const ScalarField& u1, const ScalarField& l1) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) y.at(i, j) = 0.5 * u0(i, j) + 0.5 * (u1(i, j) + dt * l1(i, j));
  };
  stage2(U2.rho, U0.rho, U1.rho, L1.rho);
  for (int b = 0; b < g.dim; ++b) stage2(U2.m.c[b], U0.m.c[b], U1.m.c[b], L1.m.c[b]);
  stage2(U2.rho_e, U0.rho_e, U1.rho_e, L1.rho_e);
  return to_primitive(U2, md, bd, s.t + dt, cfg.floor, out);
}

}  // namespace

FieldSet step(const FieldSet& s, double dt, const SolverConfig& cfg, const Models& m, const BoundaryData& bd,
              const ForcingFn& f, StepInfo* info) {
  if (!(dt > 0.0) || dt < 1e-300) throw SolverError("time step underflow");
  FieldSet out;
  if (try_step(s, dt, cfg, m, bd, f, out)) {
    if (info) *info = {dt, 0};
    return out;
  }
  if (try_step(s, 0.5 * dt, cfg, m, bd, f, out)) {
    if (info) *info = {0.5 * dt, 1};
    return out;
  }
  std::ostringstream os;
  os << "positivity lost at t=" << s.t << " even after halving dt to " << 0.5 * dt;
  throw SolverError(os.str());
}

Trajectory simulate(const FieldSet& init, const SolverConfig& cfg, const Models& m, const BoundaryData& bd,
                    const ForcingFn& f) {
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw SolverError("CFL must lie in (0, 1]");
  if (!(cfg.floor > 0.0)) throw SolverError("positivity floor must be positive");
  Trajectory tr;
  tr.models = m;
  tr.boundary = bd;
  tr.forcing = f;
  FieldSet s = init;
  sync_ghosts(s, bd, s.t);
  tr.frames.push_back(s);
  const double t0 = s.t;
  double next_snap = cfg.snapshot_dt > 0 ? t0 + cfg.snapshot_dt : 0.0;
  const double eps_t = 1e-12 * std::max(1.0, cfg.t_end);
  while (s.t < cfg.t_end - eps_t) {
    if (tr.steps >= cfg.max_steps) throw SolverError("step limit reached");
    double dt = stable_dt(s, m, cfg.cfl);
    double target = cfg.t_end;
    if (cfg.snapshot_dt > 0) target = std::min(target, next_snap);
    bool lands = false;
    if (s.t + dt >= target - eps_t) {
      dt = target - s.t;
      lands = true;
    }
    StepInfo info;
    FieldSet next = step(s, dt, cfg, m, bd, f, &info);
    tr.rejections += info.rejections;
    if (info.rejections) lands = false;
    s = std::move(next);
    if (lands) s.t = target;
    ++tr.steps;
    const bool at_end = s.t >= cfg.t_end - eps_t;
    if (cfg.snapshot_dt <= 0) {
      tr.frames.push_back(s);
    } else if (lands || at_end) {
      if (lands && std::abs(s.t - next_snap) <= eps_t) next_snap += cfg.snapshot_dt;
      tr.frames.push_back(s);
    }
  }
  return tr;
}

Totals totals(const FieldSet& s, const Models& m, const BoundaryData& bd, const ScalarField* Theta) {
  const Grid& g = s.grid();
  Totals out;
  out.t = s.t;
  out.momentum = Vec::Zero(g.dim);
  std::vector<double> kin(g.cells()), rhoe(g.cells()), rhos(g.cells()), th(g.cells());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = i + g.nx * j;
      const double r = s.rho(i, j);
      const ThermoEval v = eval(m.thermo, {r, s.theta(i, j)});
      kin[k] = 0.5 * r * s.u.at(i, j).squaredNorm();
      rhoe[k] = r * v.e;
      rhos[k] = r * v.s;
      th[k] = Theta ? (*Theta)(i, j) : s.theta(i, j);
    }
  auto cellv = [&](const std::vector<double>& v) {
    return integrate_fn(g, [&](int i, int j) { return v[i + g.nx * j]; });
  };
  out.mass = integrate(s.rho);
  for (int b = 0; b < g.dim; ++b)
    out.momentum[b] = integrate_fn(g, [&](int i, int j) { return s.rho(i, j) * s.u.c[b](i, j); });
  out.energy = cellv(kin) + cellv(rhoe);
  out.entropy = cellv(rhos);
  out.ballistic = integrate_fn(g, [&](int i, int j) {
    const int k = i + g.nx * j;
    return kin[k] + rhoe[k] - th[k] * rhos[k];
  });
  out.wall_heat = boundary_integral(g, [&](const BoundaryPoint& p) {
    // nearest interior cell to the face
    int i = 0, j = 0;
    if (g.dim == 1) {
      i = p.normal[0] < 0 ? 0 : g.nx - 1;
    } else {
      i = std::clamp(static_cast<int>((p.x - g.x0) / g.hx), 0, g.nx - 1);
      j = std::clamp(static_cast<int>((p.y - g.y0) / g.hy), 0, g.ny - 1);
    }
    const double thB = bd.theta_B(s.t, p.x, p.y);
    const double dK = kappa_integral(m.transport, thB) - kappa_integral(m.transport, s.theta(i, j));
    // q.n = -dK/dn with the face half a cell from the center
    const double hn = g.dim == 1 ? g.hx : (std::abs(p.normal[0]) > 0 ? g.hx : g.hy);
    return -dK / (0.5 * hn);
  });
  return out;
}

FieldSet decay_initial(const Grid& g, double rho0, double theta_wall, double amp_u, double amp_theta) {
  constexpr double pi = std::numbers::pi;
  FieldSet f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = (g.xc(i) - g.x0) / (g.x1 - g.x0);
      const double y = g.dim == 2 ? (g.yc(j) - g.y0) / (g.y1 - g.y0) : 0.5;
      const double sx = std::sin(pi * x), sy = std::sin(pi * y);
      const double bump = g.dim == 2 ? sx * sy : sx;
      f.rho.at(i, j) = rho0;
      f.theta.at(i, j) = theta_wall * (1.0 + amp_theta * bump);
      if (g.dim == 1) {
        f.u.c[0].at(i, j) = amp_u * std::sin(2 * pi * x);
      } else {
        f.u.c[0].at(i, j) = amp_u * std::sin(2 * pi * x) * sy * sy;
        f.u.c[1].at(i, j) = amp_u * sx * sx * std::sin(2 * pi * y);
      }
    }
  return f;
}

}  // namespace nsf
