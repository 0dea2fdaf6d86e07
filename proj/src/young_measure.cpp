#include "nsf/young_measure.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

int cell_index(const Grid& g, int i, int j) { return i + g.nx * j; }

Mat traceless(const Mat& A) {
  const int d = static_cast<int>(A.rows());
  return A - (A.trace() / d) * Mat::Identity(d, d);
}

PhaseAtom atom_from_frame(const FieldSet& f, const TensorField& Gu, const VectorField& Gth, int i, int j) {
  PhaseAtom a;
  a.rho = f.rho(i, j);
  a.u = f.u.at(i, j);
  a.theta = f.theta(i, j);
  a.D_u = sym_part(Gu.at(i, j));
  a.D_theta = Gth.at(i, j);
  return a;
}

}  // namespace

AtomicYoungMeasure::AtomicYoungMeasure(const Grid& g, std::vector<double> times)
    : grid_(g), times_(std::move(times)) {
  atoms_.resize(static_cast<size_t>(grid_.cells()) * times_.size());
}

std::vector<WeightedAtom>& AtomicYoungMeasure::cell(int level, int i, int j) {
  return atoms_[static_cast<size_t>(level) * grid_.cells() + cell_index(grid_, i, j)];
}

const std::vector<WeightedAtom>& AtomicYoungMeasure::cell(int level, int i, int j) const {
  return atoms_[static_cast<size_t>(level) * grid_.cells() + cell_index(grid_, i, j)];
}

void AtomicYoungMeasure::validate() const {
  for (int l = 0; l < levels(); ++l)
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) {
        const auto& c = cell(l, i, j);
        double s = 0;
        for (const auto& wa : c) {
          if (!(wa.w >= 0.0)) throw DomainError("Young measure: negative weight");
          if (!(wa.a.rho >= 0.0) || !(wa.a.theta > 0.0)) throw DomainError("Young measure: atom outside phase space");
          if ((wa.a.D_u - wa.a.D_u.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw DomainError("Young measure: D_u not symmetric");
          s += wa.w;
        }
        if (std::abs(s - 1.0) > 1e-12) {
          std::ostringstream os;
          os << "Young measure: weights sum to " << s << " at level " << l << " cell (" << i << "," << j << ")";
          throw DomainError(os.str());
        }
      }
}

AtomicYoungMeasure dirac_from_frames(const std::vector<FieldSet>& frames) {
  if (frames.empty()) throw DomainError("no frames");
  const Grid& g = frames.front().grid();
  std::vector<double> times;
  for (const auto& f : frames) times.push_back(f.t);
  AtomicYoungMeasure V(g, times);
  for (int l = 0; l < static_cast<int>(frames.size()); ++l) {
    const FieldSet& f = frames[l];
    const TensorField Gu = grad_vector(f.u);
    const VectorField Gth = gradient(f.theta);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) V.cell(l, i, j) = {{1.0, atom_from_frame(f, Gu, Gth, i, j)}};
  }
  return V;
}

AtomicYoungMeasure dirac_from_trajectory(const Trajectory& tr) { return dirac_from_frames(tr.frames); }

AtomicYoungMeasure dirac_from_strong(const StrongSolution& s, const Grid& g, const std::vector<double>& times) {
  AtomicYoungMeasure V(g, times);
  for (int l = 0; l < static_cast<int>(times.size()); ++l)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const StrongPoint p = s.at(times[l], g.xc(i), g.yc(j));
        PhaseAtom a;
        a.rho = p.rho;
        a.u = p.u;
        a.theta = p.theta;
        a.D_u = sym_part(p.grad_u);
        a.D_theta = p.grad_theta;
        V.cell(l, i, j) = {{1.0, a}};
      }
  return V;
}

AtomicYoungMeasure mix(const std::vector<AtomicYoungMeasure>& parts, const std::vector<double>& weights) {
  if (parts.empty() || parts.size() != weights.size()) throw DomainError("mix: parts and weights differ in size");
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("mix: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mix: weights must sum to one");
  const AtomicYoungMeasure& first = parts.front();
  for (const auto& p : parts)
    if (!p.grid().same_as(first.grid()) || p.times() != first.times())
      throw DomainError("mix: measures live on different grids or time levels");
  AtomicYoungMeasure out(first.grid(), first.times());
  const Grid& g = first.grid();
  for (int l = 0; l < first.levels(); ++l)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        auto& dst = out.cell(l, i, j);
        for (size_t k = 0; k < parts.size(); ++k) {
          if (weights[k] == 0.0) continue;
          for (const auto& wa : parts[k].cell(l, i, j)) dst.push_back({weights[k] * wa.w, wa.a});
        }
      }
  return out;
}

ScalarField expect(const AtomicYoungMeasure& V, int level, const Observable& f) {
  const Grid& g = V.grid();
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double s = 0;
      for (const auto& wa : V.cell(level, i, j)) {
        const double v = f(wa.a);
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << "observable not finite at level " << level << " cell (" << i << "," << j << "): rho=" << wa.a.rho
             << " theta=" << wa.a.theta;
          throw DomainError(os.str());
        }
        s += wa.w * v;
      }
      out.at(i, j) = s;
    }
  fill_ghosts(out, GhostKind::Extrapolate);
  return out;
}

double kinetic_density(const PhaseAtom& a) { return a.rho > 0.0 ? 0.5 * a.rho * a.u.squaredNorm() : 0.0; }

double internal_energy_density(const ThermoModel& m, const PhaseAtom& a) {
  if (a.rho > 0.0) return a.rho * eval(m, {a.rho, a.theta}).e;
  return m.kind == EosKind::MolecularRadiation ? m.a * a.theta * a.theta : 0.0;
}

double entropy_density(const ThermoModel& m, const PhaseAtom& a) {
  if (a.rho > 0.0) return a.rho * eval(m, {a.rho, a.theta}).s;
  return m.kind == EosKind::MolecularRadiation ? 2.0 * m.a * a.theta : 0.0;
}

double entropy_production(const Models& m, const PhaseAtom& a) {
  return entropy_production_density(m.transport, {a.rho, a.theta}, a.D_u, a.D_theta);
}

// ---------------------------------------------------------------------------------------------
// Theta-tilde

ThetaTilde ThetaTilde::analytic(const std::string& name, const Grid& g, const std::vector<double>& times,
                                const std::function<double(double, double, double)>& f,
                                const std::function<double(double, double, double)>& f_t,
                                const std::function<Vec(double, double, double)>& grad) {
  ThetaTilde T;
  T.name = name;
  for (double t : times) {
    ScalarField v(g), dt(g);
    VectorField gr(g, g.dim);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.xc(i), y = g.yc(j);
        v.at(i, j) = f(t, x, y);
        dt.at(i, j) = f_t(t, x, y);
        gr.set(i, j, grad(t, x, y));
      }
    T.value.push_back(v);
    T.dt.push_back(dt);
    T.grad.push_back(gr);
  }
  return T;
}

ThetaTilde ThetaTilde::from_strong(const StrongSolution& s, const Grid& g, const std::vector<double>& times) {
  auto at = s.at;
  return analytic(
      "strong:" + s.id, g, times, [at](double t, double x, double y) { return at(t, x, y).theta; },
      [at](double t, double x, double y) { return at(t, x, y).theta_t; },
      [at](double t, double x, double y) { return at(t, x, y).grad_theta; });
}

ThetaTilde ThetaTilde::harmonic(const Grid& g, const BoundaryData& bd, const std::vector<double>& times) {
  ThetaTilde T;
  T.name = "harmonic:" + bd.name;
  bool steady = true;
  for (double t : times) {
    for (int k = 0; k <= 8 && steady; ++k) {
      const double x = g.x0 + (g.x1 - g.x0) * k / 8.0;
      const double y = g.dim == 2 ? g.y0 + (g.y1 - g.y0) * k / 8.0 : 0.0;
      if (bd.dtheta_B_dt && bd.dtheta_B_dt(t, x, g.dim == 2 ? g.y0 : 0.0) != 0.0) steady = false;
      if (bd.dtheta_B_dt && bd.dtheta_B_dt(t, g.x0, y) != 0.0) steady = false;
    }
  }
  const std::vector<double> ts = steady ? std::vector<double>{times.front()} : times;
  for (double t : ts) {
    HarmonicResult h = harmonic_extension(g, bd, t);
    T.grad.push_back(gradient(h.theta));
    T.value.push_back(std::move(h.theta));
  }
  const int n = static_cast<int>(ts.size());
  for (int l = 0; l < n; ++l) {
    ScalarField dt(g);
    if (n > 1) {
      const int a = std::max(l - 1, 0), b = std::min(l + 1, n - 1);
      const double h = ts[b] - ts[a];
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) dt.at(i, j) = (T.value[b](i, j) - T.value[a](i, j)) / h;
    }
    T.dt.push_back(dt);
  }
  return T;
}

// ---------------------------------------------------------------------------------------------
// Moments

MVProblem prepare(const AtomicYoungMeasure& V, const Models& md, const ForcingFn& forcing) {
  MVProblem P;
  P.V = &V;
  P.models = md;
  P.forcing = forcing;
  const Grid& g = V.grid();
  const int d = g.dim, n = g.cells();
  P.defect.assign(V.levels(), 0.0);
  P.rM.assign(V.levels(), std::vector<Mat>(n, Mat::Zero(d, d)));
  for (int l = 0; l < V.levels(); ++l) {
    LevelMoments M;
    for (auto* v : {&M.rho, &M.rs, &M.energy, &M.sigma, &M.half_u2, &M.inv_theta, &M.g_over_theta, &M.theta, &M.p})
      v->assign(n, 0.0);
    for (auto* v : {&M.m, &M.u, &M.rsu, &M.kDth, &M.Dth}) v->assign(n, Vec::Zero(d));
    for (auto* v : {&M.mm, &M.D, &M.S}) v->assign(n, Mat::Zero(d, d));
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const int k = cell_index(g, i, j);
        for (const auto& wa : V.cell(l, i, j)) {
          const PhaseAtom& a = wa.a;
          const double w = wa.w;
          const Coefficients c = coefficients(md.transport, a.rho, a.theta);
          const double rs = entropy_density(md.thermo, a);
          M.rho[k] += w * a.rho;
          M.rs[k] += w * rs;
          M.energy[k] += w * (kinetic_density(a) + internal_energy_density(md.thermo, a));
          M.sigma[k] += w * entropy_production(md, a);
          M.half_u2[k] += w * 0.5 * a.u.squaredNorm();
          M.inv_theta[k] += w / a.theta;
          M.theta[k] += w * a.theta;
          if (a.rho > 0.0) {
            const ThermoEval v = eval(md.thermo, {a.rho, a.theta});
            M.p[k] += w * v.p;
            M.g_over_theta[k] += w * (v.e - a.theta * v.s + v.p / a.rho) / a.theta;
          } else if (md.thermo.kind == EosKind::MolecularRadiation) {
            M.p[k] += w * md.thermo.a * a.theta * a.theta;
          }
          M.m[k] += w * a.rho * a.u;
          M.u[k] += w * a.u;
          M.rsu[k] += w * rs * a.u;
          M.kDth[k] += w * c.kappa / a.theta * a.D_theta;
          M.Dth[k] += w * a.D_theta;
          M.mm[k] += w * a.rho * a.u * a.u.transpose();
          M.D[k] += w * a.D_u;
          M.S[k] += w * viscous_stress_sym(c, a.D_u);
        }
      }
    P.moments.push_back(std::move(M));
  }
  return P;
}

void attach(MVProblem& P, const DefectBundle& b) {
  const int L = P.V->levels();
  const int n = P.V->grid().cells();
  const int d = P.V->grid().dim;
  if (static_cast<int>(b.D.size()) != L || static_cast<int>(b.xi.size()) != L || static_cast<int>(b.rM.size()) != L)
    throw DomainError("defect bundle does not match the number of time levels");
  for (int l = 0; l < L; ++l) {
    if (!(b.D[l] >= 0.0) || !(b.xi[l] >= 0.0)) throw DomainError("defect bundle needs D >= 0 and xi >= 0");
    if (static_cast<int>(b.rM[l].size()) != n) throw DomainError("defect bundle r^M does not match the grid");
    for (const Mat& r : b.rM[l])
      if (r.rows() != d || r.cols() != d) throw DomainError("defect bundle r^M has the wrong dimension");
  }
  P.defect = b.D;
  P.rM = b.rM;
}

double time_integral(const std::vector<double>& times, const std::vector<double>& values, int k) {
  double s = 0;
  for (int l = 0; l < k; ++l) s += 0.5 * (values[l] + values[l + 1]) * (times[l + 1] - times[l]);
  return s;
}

namespace {

// Forcing at cell centers; zero when absent.
Forcing forcing_at(const MVProblem& P, double t, double x, double y) {
  if (P.forcing) return P.forcing(t, x, y);
  Forcing f;
  f.F_m = Vec::Zero(P.V->grid().dim);
  return f;
}

// Integral over the grid of fn(k, x, y).
double cells(const Grid& g, const std::function<double(int, double, double)>& fn) {
  return integrate_fn(g, [&](int i, int j) { return fn(cell_index(g, i, j), g.xc(i), g.yc(j)); });
}

void note(ResidualReport& r, double value, bool signed_min, const std::string& test, int level) {
  const double mag = std::abs(value);
  if (mag > r.max_abs) {
    r.max_abs = mag;
    if (!signed_min) {
      r.worst_test = test;
      r.worst_level = level;
    }
  }
  if (value < r.min_value) {
    r.min_value = value;
    if (signed_min) {
      r.worst_test = test;
      r.worst_level = level;
    }
  }
}

}  // namespace

ResidualReport continuity_residual(const MVProblem& P, const std::vector<ScalarTest>& tests) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  ResidualReport R;
  R.clause = "continuity";
  R.per_level.assign(V.levels(), 0.0);
  for (const auto& psi : tests) {
    std::vector<double> mass(V.levels()), flux(V.levels());
    for (int l = 0; l < V.levels(); ++l) {
      const auto& M = P.moments[l];
      const double t = ts[l];
      mass[l] = cells(g, [&](int k, double x, double y) { return M.rho[k] * psi.f(t, x, y); });
      flux[l] = cells(g, [&](int k, double x, double y) {
        return M.rho[k] * psi.f_t(t, x, y) + M.m[k].dot(psi.grad(t, x, y)) +
               forcing_at(P, t, x, y).F_rho * psi.f(t, x, y);
      });
    }
    for (int l = 1; l < V.levels(); ++l) {
      const double r = mass[l] - mass[0] - time_integral(ts, flux, l);
      note(R, r, false, psi.name, l);
      R.per_level[l] = std::max(R.per_level[l], std::abs(r));
    }
  }
  return R;
}

ResidualReport momentum_residual(const MVProblem& P, const std::vector<VectorTest>& tests) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  ResidualReport R;
  R.clause = "momentum";
  R.per_level.assign(V.levels(), 0.0);
  for (const auto& phi : tests) {
    std::vector<double> mom(V.levels()), flux(V.levels());
    for (int l = 0; l < V.levels(); ++l) {
      const auto& M = P.moments[l];
      const auto& rM = P.rM[l];
      const double t = ts[l];
      mom[l] = cells(g, [&](int k, double x, double y) { return M.m[k].dot(phi.v(t, x, y)); });
      flux[l] = cells(g, [&](int k, double x, double y) {
        const Mat G = phi.grad(t, x, y);
        return M.m[k].dot(phi.v_t(t, x, y)) + ddot(M.mm[k], G) + M.p[k] * G.trace() - ddot(M.S[k], G) +
               forcing_at(P, t, x, y).F_m.dot(phi.v(t, x, y)) + ddot(rM[k], G);
      });
    }
    for (int l = 1; l < V.levels(); ++l) {
      const double r = mom[l] - mom[0] - time_integral(ts, flux, l);
      note(R, r, false, phi.name, l);
      R.per_level[l] = std::max(R.per_level[l], std::abs(r));
    }
  }
  return R;
}

ResidualReport velocity_compat(const MVProblem& P, const std::vector<TensorTest>& tests) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  ResidualReport R;
  R.clause = "velocity_compat";
  R.per_level.assign(V.levels(), 0.0);
  for (const auto& T : tests) {
    std::vector<double> vals(V.levels());
    for (int l = 0; l < V.levels(); ++l) {
      const auto& M = P.moments[l];
      const double t = ts[l];
      vals[l] = cells(g, [&](int k, double x, double y) {
        return -M.u[k].dot(T.div(t, x, y)) - ddot(M.D[k], T.T(t, x, y));
      });
      R.per_level[l] = std::max(R.per_level[l], std::abs(vals[l]));
    }
    const double r = V.levels() > 1 ? time_integral(ts, vals, V.levels() - 1) : vals[0];
    note(R, r, false, T.name, V.levels() - 1);
  }
  return R;
}

TemperatureCompat temperature_compat(const MVProblem& P, const ThetaTilde& Th, const std::vector<VectorTest>& tests) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  TemperatureCompat out;
  out.as_written.clause = "temperature_compat_as_written";
  out.consistent.clause = "temperature_compat";
  out.as_written.per_level.assign(V.levels(), 0.0);
  out.consistent.per_level.assign(V.levels(), 0.0);
  for (const auto& psi : tests) {
    std::vector<double> a(V.levels()), c(V.levels());
    for (int l = 0; l < V.levels(); ++l) {
      const auto& M = P.moments[l];
      const double t = ts[l];
      const int tl = Th.pick(l);
      double sa = 0, sc = 0;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const int k = cell_index(g, i, j);
          const double x = g.xc(i), y = g.yc(j);
          const double div = psi.grad(t, x, y).trace();
          const Vec gap = M.Dth[k] - Th.grad[tl].at(i, j);
          const double first = -(M.theta[k] - Th.value[tl](i, j)) * div;
          const double second = gap.dot(psi.v(t, x, y));
          sa += first + second;
          sc += first - second;
        }
      a[l] = sa * g.volume();
      c[l] = sc * g.volume();
      out.as_written.per_level[l] = std::max(out.as_written.per_level[l], std::abs(a[l]));
      out.consistent.per_level[l] = std::max(out.consistent.per_level[l], std::abs(c[l]));
    }
    const int last = V.levels() - 1;
    note(out.as_written, last > 0 ? time_integral(ts, a, last) : a[0], false, psi.name, last);
    note(out.consistent, last > 0 ? time_integral(ts, c, last) : c[0], false, psi.name, last);
  }
  return out;
}

ResidualReport entropy_mv_residual(const MVProblem& P, const std::vector<ScalarTest>& bumps) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  ResidualReport R;
  R.clause = "entropy";
  R.per_level.assign(V.levels(), std::numeric_limits<double>::infinity());
  R.per_level[0] = 0.0;
  for (const auto& phi : bumps) {
    std::vector<double> ent(V.levels()), flux(V.levels());
    for (int l = 0; l < V.levels(); ++l) {
      const auto& M = P.moments[l];
      const double t = ts[l];
      ent[l] = cells(g, [&](int k, double x, double y) { return M.rs[k] * phi.f(t, x, y); });
      flux[l] = cells(g, [&](int k, double x, double y) {
        const Forcing F = forcing_at(P, t, x, y);
        const double src = F.F_E * M.inv_theta[k] - F.F_rho * M.g_over_theta[k];
        const double f = phi.f(t, x, y);
        return M.rs[k] * phi.f_t(t, x, y) + (M.rsu[k] - M.kDth[k]).dot(phi.grad(t, x, y)) + (M.sigma[k] + src) * f;
      });
    }
    for (int l = 1; l < V.levels(); ++l) {
      const double slack = ent[l] - ent[0] - time_integral(ts, flux, l);
      note(R, slack, true, phi.name, l);
      R.per_level[l] = std::min(R.per_level[l], slack);
    }
  }
  return R;
}

BallisticReport ballistic_mv_residual(const MVProblem& P, const ThetaTilde& Th) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  const int L = V.levels();
  std::vector<double> E(L), diss(L), work(L);
  for (int l = 0; l < L; ++l) {
    const auto& M = P.moments[l];
    const double t = ts[l];
    const int tl = Th.pick(l);
    double e = 0, s = 0, w = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const int k = cell_index(g, i, j);
        const double T = Th.value[tl](i, j);
        const Vec gT = Th.grad[tl].at(i, j);
        e += M.energy[k] - T * M.rs[k];
        s += M.sigma[k] * T;
        double ww = -M.rs[k] * Th.dt[tl](i, j) - M.rsu[k].dot(gT) + M.kDth[k].dot(gT);
        if (P.forcing) {
          const Forcing F = P.forcing(t, g.xc(i), g.yc(j));
          ww += M.u[k].dot(F.F_m) - F.F_rho * M.half_u2[k] + F.F_E -
                T * (F.F_E * M.inv_theta[k] - F.F_rho * M.g_over_theta[k]);
        }
        w += ww;
      }
    E[l] = e * g.volume();
    diss[l] = s * g.volume();
    work[l] = w * g.volume();
  }
  BallisticReport out;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (int l = 0; l < L; ++l) {
    BallisticLevel b;
    b.t = ts[l];
    b.energy = E[l];
    b.dissipation = time_integral(ts, diss, l);
    b.lhs = E[l] + b.dissipation + P.defect[l];
    b.rhs = E[0] + time_integral(ts, work, l);
    b.slack = b.rhs - b.lhs;
    if (l > 0) out.min_slack = std::min(out.min_slack, b.slack);
    out.levels.push_back(b);
  }
  if (L == 1) out.min_slack = 0.0;
  return out;
}

ResidualReport entropy_inequality_residual(const Trajectory& tr, const std::vector<ScalarTest>& bumps) {
  const AtomicYoungMeasure V = dirac_from_trajectory(tr);
  return entropy_mv_residual(prepare(V, tr.models, tr.forcing), bumps);
}

BallisticReport ballistic_report(const Trajectory& tr, const ThetaTilde& Th) {
  const AtomicYoungMeasure V = dirac_from_trajectory(tr);
  return ballistic_mv_residual(prepare(V, tr.models, tr.forcing), Th);
}

DefectCompatReport defect_compat_check(const MVProblem& P, const std::vector<double>& xi,
                                       const std::vector<VectorTest>& tests) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  DefectCompatReport R;
  for (int l = 0; l < V.levels(); ++l) {
    const double t = V.times()[l];
    for (const auto& phi : tests) {
      const double pair = cells(g, [&](int k, double x, double y) { return ddot(P.rM[l][k], phi.grad(t, x, y)); });
      const double bound = xi[l] * P.defect[l] * c1_norm(phi, g, t);
      double ratio = 0;
      if (bound > 0.0) ratio = std::abs(pair) / bound;
      else if (std::abs(pair) > 1e-14) ratio = std::numeric_limits<double>::infinity();
      R.max_ratio = std::max(R.max_ratio, ratio);
    }
  }
  R.ok = R.max_ratio <= 1.0;
  return R;
}

KornPoincareReport korn_poincare_check(const MVProblem& P, const VectorTest& U, double C_P) {
  const AtomicYoungMeasure& V = *P.V;
  const Grid& g = V.grid();
  const auto& ts = V.times();
  const int L = V.levels();
  for (int l = 0; l < L; ++l) {
    const double trace = boundary_integral(g, [&](const BoundaryPoint& b) { return U.v(ts[l], b.x, b.y).norm(); });
    if (trace > 1e-12) {
      std::ostringstream os;
      os << "comparison velocity '" << U.name << "' has nonzero boundary trace " << trace << " at t=" << ts[l];
      throw DomainError(os.str());
    }
  }
  std::vector<double> lhs(L), r0(L), rf(L), rs(L);
  for (int l = 0; l < L; ++l) {
    const double t = ts[l];
    double a = 0, b = 0, c = 0, d = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.xc(i), y = g.yc(j);
        const Vec Uv = U.v(t, x, y);
        const Mat DU = sym_part(U.grad(t, x, y));
        const Mat D0U = traceless(DU);
        for (const auto& wa : V.cell(l, i, j)) {
          const Mat D0u = traceless(wa.a.D_u);
          a += wa.w * (wa.a.u - Uv).squaredNorm();
          b += wa.w * (D0u - D0U).squaredNorm();
          c += wa.w * (D0u - DU).squaredNorm();
          d += wa.w * (wa.a.D_u - DU).squaredNorm();
        }
      }
    lhs[l] = a * g.volume();
    r0[l] = C_P * b * g.volume();
    rf[l] = C_P * c * g.volume();
    rs[l] = C_P * d * g.volume();
  }
  KornPoincareReport R;
  if (L == 1) {
    R.lhs = lhs[0];
    R.rhs_traceless = r0[0];
    R.rhs_full = rf[0];
    R.rhs_sym = rs[0];
  } else {
    R.lhs = time_integral(ts, lhs, L - 1);
    R.rhs_traceless = time_integral(ts, r0, L - 1);
    R.rhs_full = time_integral(ts, rf, L - 1);
    R.rhs_sym = time_integral(ts, rs, L - 1);
  }
  R.ratio = R.rhs_traceless > 0.0 ? R.lhs / R.rhs_traceless : std::numeric_limits<double>::infinity();
  return R;
}

InitialEnergyReport initial_energy_check(const AtomicYoungMeasure& V, const ThermoModel& m,
                                         const std::vector<double>& Thetas) {
  InitialEnergyReport R;
  for (double T : Thetas) {
    const ScalarField f = expect(V, 0, [&](const PhaseAtom& a) {
      return kinetic_density(a) + internal_energy_density(m, a) - T * entropy_density(m, a);
    });
    const double v = integrate(f);
    R.finite = R.finite && std::isfinite(v);
    R.values.push_back(v);
  }
  return R;
}

}  // namespace nsf
