#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsf/errors.hpp"
#include "nsf/young_measure.hpp"

using namespace nsf;

namespace {

constexpr double kPi = std::numbers::pi;

Models gas() { return {ThermoModel::perfect_gas(1.5), TransportModel::affine_theta(0.1, 0.1, 0.1)}; }

AtomicYoungMeasure uniform(const Grid& g, double rho, double u0, double theta, int levels = 2) {
  std::vector<double> times;
  for (int l = 0; l < levels; ++l) times.push_back(0.1 * l);
  AtomicYoungMeasure V(g, times);
  for (int l = 0; l < levels; ++l)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        PhaseAtom a;
        a.rho = rho;
        a.u = Vec::Zero(g.dim);
        a.u[0] = u0;
        a.theta = theta;
        a.D_u = Mat::Zero(g.dim, g.dim);
        a.D_theta = Vec::Zero(g.dim);
        V.cell(l, i, j) = {{1.0, a}};
      }
  return V;
}

FieldSet smooth_frame(const Grid& g, double t) {
  FieldSet f(g);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.xc(i);
    f.rho.at(i) = 1.0 + 0.2 * std::cos(kPi * x);
    f.u.c[0].at(i) = 0.3 * std::sin(kPi * x);
    f.theta.at(i) = 1.0 + 0.1 * x;
  }
  f.t = t;
  sync_ghosts(f, BoundaryData::affine(1.0, 0.1), t);
  return f;
}

}  // namespace

TEST_CASE("Dirac measures") {
  const Grid g = Grid::line(12);
  const FieldSet f = smooth_frame(g, 0.0);
  const AtomicYoungMeasure V = dirac_from_frames({f});
  V.validate();
  const ScalarField r = expect(V, 0, [](const PhaseAtom& a) { return a.rho; });
  const ScalarField u2 = expect(V, 0, [](const PhaseAtom& a) { return a.u.squaredNorm(); });
  for (int i = 0; i < g.nx; ++i) {
    CHECK(V.cell(0, i).size() == 1);
    CHECK(V.cell(0, i).front().w == 1.0);
    CHECK(r(i) == f.rho(i));
    CHECK(u2(i) == doctest::Approx(f.u.c[0](i) * f.u.c[0](i)));
  }
}

TEST_CASE("mixtures") {
  const Grid g = Grid::line(4);
  const AtomicYoungMeasure A = uniform(g, 1.0, 1.0, 1.0), B = uniform(g, 3.0, 3.0, 1.0);
  const AtomicYoungMeasure M = mix({A, B}, {0.5, 0.5});
  M.validate();
  const ScalarField r = expect(M, 0, [](const PhaseAtom& a) { return a.rho; });
  const ScalarField m = expect(M, 0, [](const PhaseAtom& a) { return a.rho * a.u[0]; });
  const ScalarField r2 = expect(M, 0, [](const PhaseAtom& a) { return a.rho * a.rho; });
  for (int i = 0; i < g.nx; ++i) {
    CHECK(r(i) == doctest::Approx(2.0));
    CHECK(m(i) == doctest::Approx(5.0));
    CHECK(r(i) * r(i) <= r2(i));
  }
  const ScalarField one = expect(mix({A}, {1.0}), 1, [](const PhaseAtom& a) { return a.rho; });
  CHECK(one(0) == 1.0);
  const AtomicYoungMeasure C = uniform(g, 5.0, 0.0, 1.0);
  const double nested = expect(mix({mix({A, B}, {0.5, 0.5}), C}, {0.5, 0.5}), 0, [](const PhaseAtom& a) { return a.rho; })(0);
  const double flat = expect(mix({A, B, C}, {0.25, 0.25, 0.5}), 0, [](const PhaseAtom& a) { return a.rho; })(0);
  CHECK(nested == doctest::Approx(flat));
  CHECK_THROWS_AS(mix({A, B}, {0.5, 0.6}), DomainError);
}

TEST_CASE("non-finite observables name a witness") {
  const AtomicYoungMeasure V = uniform(Grid::line(4), 0.0, 0.0, 1.0);
  CHECK_THROWS_AS(expect(V, 0, [](const PhaseAtom& a) { return 1.0 / a.rho; }), DomainError);
  PhaseAtom vac;
  vac.rho = 0.0;
  vac.u = Vec::Constant(1, 2.0);
  CHECK(kinetic_density(vac) == 0.0);
}

TEST_CASE("compatibility residuals") {
  const Models md = gas();
  const StrongSolution s = manufactured("shear", 1, md.thermo, md.transport);
  const TestFunctionSet tf = make_test_functions(Grid::line(32), 3);
  auto velocity = [&](int n) {
    const AtomicYoungMeasure V = dirac_from_strong(s, Grid::line(n), {0.0, 0.05, 0.1});
    const MVProblem P = prepare(V, md, forcing_of(s, md));
    return velocity_compat(P, make_test_functions(Grid::line(n), 3).tensors).max_abs;
  };
  const double a = velocity(32), b = velocity(64);
  CHECK(a < 1e-3);
  CHECK(std::log2(a / b) >= 1.0);

  SUBCASE("corrupted D_u is flagged") {
    AtomicYoungMeasure V = dirac_from_strong(s, Grid::line(32), {0.0, 0.05, 0.1});
    for (int l = 0; l < V.levels(); ++l)
      for (int i = 0; i < 32; ++i) V.cell(l, i).front().a.D_u(0, 0) += 1.0;
    const MVProblem P = prepare(V, md, forcing_of(s, md));
    CHECK(velocity_compat(P, tf.tensors).max_abs > 1e-2);
  }
  SUBCASE("zero tests give zero") {
    const AtomicYoungMeasure V = dirac_from_strong(s, Grid::line(32), {0.0, 0.05});
    const MVProblem P = prepare(V, md, forcing_of(s, md));
    const TensorTest zero{"zero", [](double, double, double) { return Mat::Zero(1, 1); },
                          [](double, double, double) { return Vec::Zero(1); }};
    CHECK(velocity_compat(P, {zero}).max_abs == 0.0);
  }
  SUBCASE("temperature matching the comparison field") {
    const Grid g = Grid::line(32);
    const std::vector<double> times{0.0, 0.05};
    const AtomicYoungMeasure V = dirac_from_strong(s, g, times);
    const MVProblem P = prepare(V, md, forcing_of(s, md));
    const TemperatureCompat tc = temperature_compat(P, ThetaTilde::from_strong(s, g, times), tf.fields);
    CHECK(tc.consistent.max_abs < 1e-14);
    CHECK(tc.as_written.max_abs < 1e-14);
  }
}

TEST_CASE("equilibrium residuals vanish") {
  const Grid g = Grid::rect(8, 8);
  const AtomicYoungMeasure V = uniform(g, 1.0, 0.0, 1.0, 3);
  const MVProblem P = prepare(V, gas());
  const TestFunctionSet tf = make_test_functions(g, 3);
  CHECK(continuity_residual(P, tf.scalars).max_abs < 1e-12);
  CHECK(momentum_residual(P, tf.dirichlet).max_abs < 1e-12);
  CHECK(velocity_compat(P, tf.tensors).max_abs < 1e-12);
  CHECK(std::abs(entropy_mv_residual(P, tf.bumps).min_value) < 1e-12);
  const BallisticReport b = ballistic_mv_residual(P, ThetaTilde::harmonic(g, BoundaryData::constant(1.0), V.times()));
  CHECK(std::abs(b.min_slack) < 1e-12);
}

TEST_CASE("defects") {
  const Grid g = Grid::line(16);
  const AtomicYoungMeasure V = uniform(g, 1.0, 0.0, 1.0, 2);
  MVProblem P = prepare(V, gas());
  const TestFunctionSet tf = make_test_functions(g, 3);

  SUBCASE("zero momentum defect is always compatible") {
    attach(P, DefectBundle{{std::vector<Mat>(g.cells(), Mat::Zero(1, 1)), std::vector<Mat>(g.cells(), Mat::Zero(1, 1))},
                           {0.0, 0.0},
                           {0.0, 0.0}});
    CHECK(defect_compat_check(P, {0.0, 0.0}, tf.dirichlet).ok);
  }
  SUBCASE("momentum defect without dissipation defect is reported") {
    std::vector<Mat> r(g.cells());
    for (int i = 0; i < g.nx; ++i) r[i] = Mat::Constant(1, 1, 1e-3 * std::sin(kPi * g.xc(i)));
    attach(P, DefectBundle{{r, r}, {0.0, 0.0}, {1.0, 1.0}});
    CHECK_FALSE(defect_compat_check(P, {1.0, 1.0}, tf.dirichlet).ok);
  }
  SUBCASE("negative dissipation defect is refused") {
    std::vector<Mat> r(g.cells(), Mat::Zero(1, 1));
    CHECK_THROWS_AS(attach(P, DefectBundle{{r, r}, {-1.0, 0.0}, {0.0, 0.0}}), DomainError);
  }
  SUBCASE("an injected momentum defect cancels a forcing mismatch") {
    // A uniform state with forcing F = d_x sigma(x) is balanced by r^M = sigma.
    MVProblem Q = prepare(V, gas(), [](double, double x, double) {
      Forcing f;
      f.F_m = Vec::Constant(1, 0.01 * kPi * std::cos(kPi * x));
      return f;
    });
    const double before = momentum_residual(Q, tf.dirichlet).max_abs;
    std::vector<Mat> r(g.cells());
    for (int i = 0; i < g.nx; ++i) r[i] = Mat::Constant(1, 1, 0.01 * std::sin(kPi * g.xc(i)));
    attach(Q, DefectBundle{{r, r}, {1.0, 1.0}, {1.0, 1.0}});
    const double after = momentum_residual(Q, tf.dirichlet).max_abs;
    CHECK(before > 1e-4);
    CHECK(after < 1e-2 * before);
  }
}

TEST_CASE("Korn-Poincare check") {
  const Grid g = Grid::line(32);
  const VectorTest U = sine_mode(g, 1);
  AtomicYoungMeasure V = uniform(g, 1.0, 0.0, 1.0, 1);
  for (int i = 0; i < g.nx; ++i) {
    auto& a = V.cell(0, i).front().a;
    a.u = U.v(0.0, g.xc(i), 0.0);
    a.D_u = sym_part(U.grad(0.0, g.xc(i), 0.0));
  }
  const MVProblem P = prepare(V, gas());
  const KornPoincareReport r = korn_poincare_check(P, U, 1.0);
  CHECK(r.lhs < 1e-20);
  VectorTest shifted = U;
  shifted.v = [U](double t, double x, double y) { return Vec(U.v(t, x, y).array() + 1.0); };
  CHECK_THROWS_AS(korn_poincare_check(P, shifted, 1.0), DomainError);
}

TEST_CASE("initial energy") {
  const Grid g = Grid::line(8);
  const AtomicYoungMeasure A = uniform(g, 1.0, 0.5, 1.0), B = uniform(g, 2.0, 0.0, 1.5);
  const ThermoModel m = ThermoModel::perfect_gas(1.5);
  const InitialEnergyReport a = initial_energy_check(A, m, {1.0, 2.0});
  const InitialEnergyReport b = initial_energy_check(B, m, {1.0, 2.0});
  const InitialEnergyReport c = initial_energy_check(mix({A, B}, {0.3, 0.7}), m, {1.0, 2.0});
  CHECK(a.finite);
  for (int k = 0; k < 2; ++k) CHECK(c.values[k] == doctest::Approx(0.3 * a.values[k] + 0.7 * b.values[k]));
}
