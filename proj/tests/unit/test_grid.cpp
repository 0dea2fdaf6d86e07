#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsf/errors.hpp"
#include "nsf/grid.hpp"

using namespace nsf;

namespace {
constexpr double kPi = std::numbers::pi;

double max_grad_error(int n) {
  const Grid g = Grid::line(n);
  const ScalarField f = sample(g, [](double x, double) { return std::sin(kPi * x); });
  const VectorField G = gradient(f);
  double err = 0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(G.at(i)[0] - kPi * std::cos(kPi * g.xc(i))));
  return err;
}
}  // namespace

TEST_CASE("gradients") {
  const Grid g = Grid::rect(8, 6);
  const ScalarField f = sample(g, [](double x, double y) { return 2.0 + 3.0 * x - y; });
  const VectorField G = gradient(f);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      CHECK(G.at(i, j)[0] == doctest::Approx(3.0).epsilon(1e-12));
      CHECK(G.at(i, j)[1] == doctest::Approx(-1.0).epsilon(1e-12));
    }
  CHECK(max_grad_error(32) / max_grad_error(64) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("divergence of a constant field") {
  const Grid g = Grid::rect(5, 7);
  VectorField v(g, 2);
  for (int a = 0; a < 2; ++a) {
    v.c[a] = sample(g, [a](double, double) { return 1.0 + a; });
  }
  const ScalarField d = divergence(v);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(d(i, j)) < 1e-13);
}

TEST_CASE("stale ghosts are refused") {
  ScalarField f = sample(Grid::line(8), [](double x, double) { return x; });
  f.at(3) = 1.0;
  CHECK_THROWS_AS(gradient(f), StaleGhostError);
}

TEST_CASE("quadrature") {
  const Grid sq = Grid::rect(10, 10);
  CHECK(integrate(ScalarField(sq, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(boundary_integral(sq, [](const BoundaryPoint&) { return 1.0; }) == doctest::Approx(4.0).epsilon(1e-14));
  const Grid line = Grid::line(16);
  CHECK(integrate(sample(line, [](double x, double) { return x; })) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("discrete integration by parts") {
  auto defect = [](int n) {
    const Grid g = Grid::rect(n, n);
    const ScalarField f = sample(g, [](double x, double y) { return std::cos(x) * std::exp(y); });
    VectorField v(g, 2);
    v.c[0] = sample(g, [](double x, double y) { return std::sin(kPi * x) * y; });
    v.c[1] = sample(g, [](double x, double y) { return x * x * std::sin(kPi * y); });
    const ScalarField dv = divergence(v);
    const VectorField gf = gradient(f);
    const double lhs = integrate_fn(g, [&](int i, int j) { return f(i, j) * dv(i, j) + gf.at(i, j).dot(v.at(i, j)); });
    // v vanishes on the boundary, so the boundary term is zero.
    return std::abs(lhs);
  };
  const double a = defect(16), b = defect(32);
  CHECK(a < 1e-2);
  CHECK(a / b > 3.0);
}

TEST_CASE("harmonic extension") {
  SUBCASE("constant data") {
    const HarmonicResult h = harmonic_extension(Grid::rect(12, 12), BoundaryData::constant(5.0), 0.0);
    CHECK(h.theta.max_interior() == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(h.theta.min_interior() == doctest::Approx(5.0).epsilon(1e-13));
  }
  SUBCASE("linear in 1D") {
    const Grid g = Grid::line(20);
    const HarmonicResult h = harmonic_extension(g, BoundaryData::affine(1.0, 2.0), 0.0);
    for (int i = 0; i < g.nx; ++i) CHECK(h.theta(i) == doctest::Approx(1.0 + 2.0 * g.xc(i)).epsilon(1e-12));
  }
  SUBCASE("1 + x on the unit square") {
    const Grid g = Grid::rect(16, 16);
    const HarmonicResult h = harmonic_extension(g, BoundaryData::affine(1.0, 1.0), 0.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) CHECK(h.theta(i, j) == doctest::Approx(1.0 + g.xc(i)).epsilon(1e-12));
    CHECK(h.residual < 1e-12);
  }
  SUBCASE("maximum principle for nonlinear data") {
    BoundaryData bd;
    bd.name = "bump";
    bd.theta_B = [](double, double x, double y) { return 1.0 + 0.5 * std::sin(3.0 * x) * std::cos(2.0 * y); };
    bd.dtheta_B_dt = [](double, double, double) { return 0.0; };
    const Grid g = Grid::rect(32, 32);
    const HarmonicResult h = harmonic_extension(g, bd, 0.0);
    CHECK(h.theta.min_interior() >= h.bmin);
    CHECK(h.theta.max_interior() <= h.bmax);
  }
}

TEST_CASE("ghost synchronisation") {
  const Grid g = Grid::line(8);
  FieldSet f(g);
  for (int i = 0; i < g.nx; ++i) {
    f.rho.at(i) = 1.0;
    f.u.c[0].at(i) = 0.7;
    f.theta.at(i) = 2.0;
  }
  sync_ghosts(f, BoundaryData::constant(2.0), 0.0);
  CHECK(f.u.c[0].raw()[g.idx(-1, 0)] == doctest::Approx(-0.7));
  CHECK(f.u.c[0].raw()[g.idx(g.nx, 0)] == doctest::Approx(-0.7));
  CHECK(f.theta.raw()[g.idx(-1, 0)] == doctest::Approx(2.0));
  const auto before = f.theta.raw();
  sync_ghosts(f, BoundaryData::constant(2.0), 0.0);
  CHECK(f.theta.raw() == before);
}
