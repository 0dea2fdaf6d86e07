#include "nsf/thermodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

// F(w) = w^-2 - 2/w + 2 log(1 + 1/w); the alternating series avoids cancellation for large w.
double log_tail_F(double w) {
  if (w >= 4.0) {
    double sum = 0.0;
    double wk = w * w * w;
    for (int k = 3; k <= 40; ++k) {
      sum += ((k % 2 == 1) ? 1.0 : -1.0) / (k * wk);
      wk *= w;
    }
    return 2.0 * sum;
  }
  return (1.0 - 2.0 * w + 2.0 * w * w * std::log1p(1.0 / w)) / (w * w);
}

void require_state(ThermoState st) {
  if (!(st.rho > 0.0) || !(st.theta > 0.0) || !std::isfinite(st.rho) || !std::isfinite(st.theta)) {
    std::ostringstream os;
    os << "thermodynamic state requires rho > 0 and theta > 0, got rho=" << st.rho << " theta=" << st.theta;
    throw DomainError(os.str());
  }
}

}  // namespace

KernelEval MolecularKernel::operator()(double q) const {
  KernelEval k;
  switch (kind_) {
    case KernelKind::Zero:
      return k;
    case KernelKind::Linear:
      k.P = q;
      k.dP = 1.0;
      k.S = q > 0 ? -std::log(q) : HUGE_VAL;
      k.dS = q > 0 ? -1.0 / q : -HUGE_VAL;
      k.G_over_q = 2.0 / 3.0;
      return k;
    case KernelKind::LogTail: {
      if (q <= 0.0) {
        k.dP = 1.0;
        k.S = HUGE_VAL;
        k.dS = -HUGE_VAL;
        k.G_over_q = 2.0 / 3.0;
        return k;
      }
      const double w = std::cbrt(q);
      const double F = log_tail_F(w);
      const double w2 = w * w;
      k.P = w2 * w2 * w * (pbar_ + F);
      k.dP = (5.0 / 3.0) * w2 * (pbar_ + F) - (2.0 / 3.0) / (1.0 + w);
      k.S = 3.0 * std::log1p(1.0 / w);
      k.dS = -1.0 / (q * (1.0 + w));
      k.G_over_q = (2.0 / 3.0) / (1.0 + w);
      return k;
    }
  }
  return k;
}

ThermoModel ThermoModel::perfect_gas(double c_v) {
  ThermoModel m;
  m.kind = EosKind::PerfectGas;
  m.c_v = c_v;
  return m;
}

ThermoModel ThermoModel::molecular_radiation(MolecularKernel kernel, double a) {
  ThermoModel m;
  m.kind = EosKind::MolecularRadiation;
  m.kernel = kernel;
  m.a = a;
  return m;
}

ThermoModel make_thermo(const ThermoSpec& spec) {
  if (spec.kind == "perfect_gas") {
    if (!(spec.c_v > 1.0)) {
      std::ostringstream os;
      os << "perfect gas requires c_v > 1 (got c_v=" << spec.c_v
         << "); with c_v <= 1 the residual bound theta^{c_v+1} <= rho e / c_v used for the Gronwall closure fails";
      throw GateError(os.str());
    }
    return ThermoModel::perfect_gas(spec.c_v);
  }
  if (spec.kind == "molecular_radiation") {
    if (spec.radiation == "stefan_boltzmann") {
      throw GateError(
          "radiation pressure p_R = a*theta^4 (Stefan-Boltzmann) is not supported: the residual term "
          "[rho s_R |u|]_res cannot be controlled without a Sobolev embedding absent from the "
          "measure-valued framework; use the quadratic law p_R = a*theta^2");
    }
    if (spec.radiation != "quadratic") throw ConfigError("unknown radiation law '" + spec.radiation + "'");
    if (!(spec.a >= 0.0)) throw GateError("radiation coefficient a must be nonnegative");
    MolecularKernel k = MolecularKernel::zero();
    if (spec.kernel == "zero") {
      k = MolecularKernel::zero();
    } else if (spec.kernel == "linear") {
      k = MolecularKernel::linear();
    } else if (spec.kernel == "log_tail") {
      if (!(spec.pbar > 0.0)) throw GateError("log_tail kernel requires pbar > 0");
      k = MolecularKernel::log_tail(spec.pbar);
    } else {
      throw ConfigError("unknown molecular kernel '" + spec.kernel + "'");
    }
    return ThermoModel::molecular_radiation(k, spec.a);
  }
  throw ConfigError("unknown model kind '" + spec.kind + "'");
}

ThermoEval eval(const ThermoModel& m, ThermoState st) {
  require_state(st);
  const double rho = st.rho;
  const double th = st.theta;
  ThermoEval r;
  if (m.kind == EosKind::PerfectGas) {
    r.p = rho * th;
    r.e = m.c_v * th;
    r.s = m.c_v * std::log(th) - std::log(rho);
    r.p_rho = th;
    r.p_theta = rho;
    r.e_rho = 0.0;
    r.e_theta = m.c_v;
    r.s_rho = -1.0 / rho;
    r.s_theta = m.c_v / th;
    return r;
  }
  const double sq = std::sqrt(th);
  const double th32 = th * sq;
  const double q = rho / th32;
  const KernelEval k = m.kernel(q);
  const double P_over_q = (m.kernel.kind() == KernelKind::Zero) ? 0.0 : k.P / q;
  const double G_over_q = k.G_over_q;
  const double a = m.a;
  if (m.kernel.kind() == KernelKind::Zero) {
    r.p = a * th * th;
    r.p_theta = 2.0 * a * th;
    r.e = a * th * th / rho;
    r.e_rho = -a * th * th / (rho * rho);
    r.e_theta = 2.0 * a * th / rho;
    r.s = 2.0 * a * th / rho;
    r.s_rho = -2.0 * a * th / (rho * rho);
    r.s_theta = 2.0 * a / rho;
    return r;
  }
  r.p = th * th32 * k.P + a * th * th;
  r.p_rho = th * k.dP;
  r.p_theta = 1.5 * rho * G_over_q + 2.0 * a * th;
  r.e = 1.5 * th * P_over_q + a * th * th / rho;
  r.e_rho = 1.5 * th * (k.dP - P_over_q) / rho - a * th * th / (rho * rho);
  r.e_theta = 2.25 * G_over_q + 2.0 * a * th / rho;
  r.s = k.S + 2.0 * a * th / rho;
  r.s_rho = k.dS * q / rho - 2.0 * a * th / (rho * rho);
  r.s_theta = -1.5 * k.dS * q / th + 2.0 * a / rho;
  return r;
}

GibbsResidual gibbs_residual(const ThermoModel& m, ThermoState st, double h_rel) {
  const ThermoEval v = eval(m, st);
  GibbsResidual g;
  g.r_theta = st.theta * v.s_theta - v.e_theta;
  g.r_rho = st.theta * v.s_rho - v.e_rho + v.p / (st.rho * st.rho);

  const double hr = h_rel * (1.0 + std::abs(st.rho));
  const double ht = h_rel * (1.0 + std::abs(st.theta));
  if (st.rho - hr <= 0.0 || st.theta - ht <= 0.0) {
    std::ostringstream os;
    os << "central-difference stencil leaves the domain at rho=" << st.rho << " theta=" << st.theta
       << " (h_rho=" << hr << ", h_theta=" << ht << ")";
    throw StencilError(os.str());
  }
  const ThermoEval rp = eval(m, {st.rho + hr, st.theta});
  const ThermoEval rm = eval(m, {st.rho - hr, st.theta});
  const ThermoEval tp = eval(m, {st.rho, st.theta + ht});
  const ThermoEval tm = eval(m, {st.rho, st.theta - ht});
  const double e_rho = (rp.e - rm.e) / (2 * hr);
  const double s_rho = (rp.s - rm.s) / (2 * hr);
  const double e_th = (tp.e - tm.e) / (2 * ht);
  const double s_th = (tp.s - tm.s) / (2 * ht);
  g.fd_mismatch = std::max({std::abs(e_rho - v.e_rho), std::abs(s_rho - v.s_rho), std::abs(e_th - v.e_theta),
                            std::abs(s_th - v.s_theta)});
  g.fd_r_theta = st.theta * s_th - e_th;
  g.fd_r_rho = st.theta * s_rho - e_rho + v.p / (st.rho * st.rho);
  return g;
}

GibbsSuiteReport gibbs_suite(const ThermoModel& m, std::uint64_t samples, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(std::log(lo), std::log(hi));
  GibbsSuiteReport R;
  R.samples = samples;
  double worst = -1;
  for (std::uint64_t k = 0; k < samples; ++k) {
    const double rho = std::exp(U(rng)), th = std::exp(U(rng));
    const ThermoEval v = eval(m, {rho, th});
    const GibbsResidual g = gibbs_residual(m, {rho, th});
    const double scale = 1.0 + std::abs(v.e) + std::abs(th * v.s);
    const double nr = std::abs(g.r_rho) / scale;
    const double nt = std::abs(g.r_theta) / scale;
    R.max_r_rho = std::max(R.max_r_rho, nr);
    R.max_r_theta = std::max(R.max_r_theta, nt);
    R.max_abs_r_rho = std::max(R.max_abs_r_rho, std::abs(g.r_rho));
    R.max_abs_r_theta = std::max(R.max_abs_r_theta, std::abs(g.r_theta));
    if (std::max(nr, nt) > worst) {
      worst = std::max(nr, nt);
      R.witness_rho = rho;
      R.witness_theta = th;
    }
  }
  return R;
}

double ballistic_energy(const ThermoModel& m, ThermoState st, double Theta) {
  if (!(Theta > 0.0)) throw DomainError("ballistic energy requires Theta > 0");
  const ThermoEval v = eval(m, st);
  return st.rho * (v.e - Theta * v.s);
}

double free_enthalpy(const ThermoModel& m, ThermoState st) {
  const ThermoEval v = eval(m, st);
  return v.e - st.theta * v.s + v.p / st.rho;
}

namespace {

// Solves g(log theta) = target for a function increasing in log theta.
template <class Value>
double invert_monotone(Value value, double target, const char* what, double rho, double guess) {
  double lo = std::log(kThetaMin);
  double hi = std::log(kThetaMax);
  const double f_lo = value(lo).first - target;
  const double f_hi = value(hi).first - target;
  if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
    std::ostringstream os;
    os << what << " inversion failed at rho=" << rho << ": target " << target << " outside bracket theta in ["
       << kThetaMin << ", " << kThetaMax << "] with values [" << f_lo + target << ", " << f_hi + target << "]";
    throw InversionError(os.str());
  }
  double y = std::clamp(guess, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const auto [f0, df0] = value(y);
    const double f = f0 - target;
    if (f == 0.0) return std::exp(y);
    if (f < 0.0) lo = y; else hi = y;
    double y_new = (df0 > 0.0) ? y - f / df0 : 0.5 * (lo + hi);
    if (!(y_new > lo && y_new < hi)) y_new = 0.5 * (lo + hi);
    const double step = std::abs(y_new - y);
    y = y_new;
    if (step <= 4e-16 * std::max(1.0, std::abs(y)) || hi - lo <= 4e-16 * std::max(1.0, std::abs(y)))
      return std::exp(y);
  }
  return std::exp(y);
}

}  // namespace

double temperature_from_entropy(const ThermoModel& m, double rho, double S) {
  if (!(rho > 0.0)) throw DomainError("entropy inversion requires rho > 0");
  const double target = S / rho;
  double guess = 0.0;
  if (m.kind == EosKind::PerfectGas && m.c_v != 0.0) guess = (target + std::log(rho)) / m.c_v;
  auto value = [&](double y) {
    const double th = std::exp(y);
    const ThermoEval v = eval(m, {rho, th});
    return std::pair<double, double>(v.s, th * v.s_theta);
  };
  return invert_monotone(value, target, "entropy", rho, guess);
}

double temperature_from_internal_energy(const ThermoModel& m, double rho, double rho_e) {
  if (!(rho > 0.0)) throw DomainError("internal energy inversion requires rho > 0");
  const double target = rho_e / rho;
  if (m.kind == EosKind::PerfectGas && m.c_v > 0.0) {
    const double th = target / m.c_v;
    if (!(th > 0.0)) throw InversionError("internal energy inversion: nonpositive temperature");
    return th;
  }
  auto value = [&](double y) {
    const double th = std::exp(y);
    const ThermoEval v = eval(m, {rho, th});
    return std::pair<double, double>(v.e, th * v.e_theta);
  };
  return invert_monotone(value, target, "internal energy", rho, 0.0);
}

ConservativeState to_conservative(const ThermoModel& m, ThermoState st, const Vec& u) {
  const ThermoEval v = eval(m, st);
  ConservativeState c;
  c.rho = st.rho;
  c.S = st.rho * v.s;
  c.m = st.rho * u;
  return c;
}

double conservative_energy(const ThermoModel& m, const ConservativeState& c) {
  const double th = temperature_from_entropy(m, c.rho, c.S);
  const ThermoEval v = eval(m, {c.rho, th});
  return c.m.squaredNorm() / (2.0 * c.rho) + c.rho * v.e;
}

ConservativePartials conservative_partials(const ThermoModel& m, const ConservativeState& c) {
  const double th = temperature_from_entropy(m, c.rho, c.S);
  ConservativePartials d;
  d.dE_drho = free_enthalpy(m, {c.rho, th}) - c.m.squaredNorm() / (2.0 * c.rho * c.rho);
  d.dE_dS = th;
  d.dE_dm = c.m / c.rho;
  return d;
}

StructureReport validate_structure(const ThermoModel& m, std::uint64_t samples, std::uint64_t seed,
                                   double kernel_c) {
  StructureReport rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(std::log(1e-3), std::log(1e3));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  auto fail = [&](const std::string& what, double rho, double th) {
    if (rep.pass) {
      rep.pass = false;
      rep.first_violation = what;
      rep.witness_rho = rho;
      rep.witness_theta = th;
    }
  };

  for (std::uint64_t i = 0; i < samples; ++i) {
    const double rho = std::exp(logu(rng));
    const double th = std::exp(logu(rng));
    const ThermoEval v = eval(m, {rho, th});
    if (!(v.p_rho > 0.0) || !(v.e_theta > 0.0)) {
      ++rep.stability_violations;
      fail(!(v.p_rho > 0.0) ? "stability: dp/drho <= 0" : "stability: de/dtheta <= 0", rho, th);
    }
  }

  if (m.kind == EosKind::MolecularRadiation) {
    const MolecularKernel& k = m.kernel;
    if (k(0.0).P != 0.0) {
      ++rep.kernel_violations;
      fail("kernel: P(0) != 0", 0, 0);
    }
    double prev_S = HUGE_VAL;
    const int nq = 2001;
    for (int i = 0; i < nq; ++i) {
      const double q = std::pow(10.0, -8.0 + 16.0 * i / (nq - 1));
      const KernelEval ke = k(q);
      const double G_over_q = ke.G_over_q;
      rep.kernel_G_over_q_max = std::max(rep.kernel_G_over_q_max, G_over_q);
      if (!(ke.dP > 0.0)) {
        ++rep.kernel_violations;
        fail("kernel: P'(q) <= 0", q, 0);
      } else if (!(G_over_q > 0.0) || !(G_over_q < kernel_c)) {
        ++rep.kernel_violations;
        fail("kernel: (5/3 P - P' q)/q outside (0, c)", q, 0);
      } else if (!(ke.dS < 0.0)) {
        ++rep.kernel_violations;
        fail("kernel: S'(q) >= 0", q, 0);
      } else if (!(ke.S < prev_S)) {
        ++rep.kernel_violations;
        fail("kernel: S not decreasing", q, 0);
      }
      prev_S = ke.S;
    }
    const double Q1 = 1e12, Q2 = 1e15;
    const double r1 = k(Q1).P / std::pow(Q1, 5.0 / 3.0);
    const double r2 = k(Q2).P / std::pow(Q2, 5.0 / 3.0);
    rep.strict_pbar_positive = r2 > 1e-6 && std::abs(r1 - r2) < 1e-3 * std::max(r2, 1e-300) + 1e-12;
    rep.strict_third_law_limit = std::abs(k(Q2).S) < 1e-4 && std::abs(k(Q2).S) < std::abs(k(Q1).S);
  }

  // Midpoint convexity of (rho, S, m) -> E.
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double r1 = std::exp(logu(rng)), t1 = std::exp(logu(rng));
    const double r2 = std::exp(logu(rng)), t2 = std::exp(logu(rng));
    Vec u1(2), u2(2);
    u1 << uni(rng), uni(rng);
    u2 << uni(rng), uni(rng);
    try {
      const ConservativeState c1 = to_conservative(m, {r1, t1}, u1);
      const ConservativeState c2 = to_conservative(m, {r2, t2}, u2);
      ConservativeState mid;
      mid.rho = 0.5 * (c1.rho + c2.rho);
      mid.S = 0.5 * (c1.S + c2.S);
      mid.m = 0.5 * (c1.m + c2.m);
      const double e1 = conservative_energy(m, c1);
      const double e2 = conservative_energy(m, c2);
      const double em = conservative_energy(m, mid);
      const double scale = std::abs(e1) + std::abs(e2) + 1.0;
      if (!(em <= 0.5 * (e1 + e2) + 1e-12 * scale)) {
        ++rep.convexity_violations;
        fail("convexity: E(midpoint) > mean", mid.rho, temperature_from_entropy(m, mid.rho, mid.S));
      }
    } catch (const InversionError&) {
      ++rep.convexity_violations;
      fail("convexity: entropy inversion failed", r1, t1);
    }
  }
  return rep;
}

EntropyBound entropy_growth_bound(const ThermoModel& m, ThermoState st, double c) {
  if (m.kind != EosKind::MolecularRadiation) throw DomainError("entropy growth bound needs a molecular model");
  require_state(st);
  const double q = st.rho / std::pow(st.theta, 1.5);
  EntropyBound b;
  b.lhs = st.rho * std::abs(m.kernel(q).S);
  b.rhs = c * (st.rho + st.rho * std::abs(std::log(st.rho)) + st.rho * std::max(0.0, std::log(st.theta)));
  return b;
}

double calibrate_entropy_bound(const ThermoModel& m, double lo, double hi, int per_axis) {
  double c = 0.0;
  for (int i = 0; i < per_axis; ++i) {
    const double rho = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (per_axis - 1));
    for (int j = 0; j < per_axis; ++j) {
      const double th = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * j / (per_axis - 1));
      const EntropyBound b = entropy_growth_bound(m, {rho, th}, 1.0);
      c = std::max(c, b.lhs / b.rhs);
    }
  }
  return c;
}

std::string to_string(EosKind k) { return k == EosKind::PerfectGas ? "perfect_gas" : "molecular_radiation"; }

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Zero: return "zero";
    case KernelKind::Linear: return "linear";
    case KernelKind::LogTail: return "log_tail";
  }
  return "?";
}

}  // namespace nsf
