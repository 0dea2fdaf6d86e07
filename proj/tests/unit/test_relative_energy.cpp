#include <doctest.h>

#include <cmath>

#include "nsf/errors.hpp"
#include "nsf/relative_energy.hpp"

using namespace nsf;

namespace oracle {
// Frozen from tools/oracles/frozen_values.py.
constexpr double kRelEnergyPg2vs1 = 0.38629436111989063;
}  // namespace oracle

namespace {
StrongState ref(double rho, double theta, int dim = 1) { return {rho, theta, Vec::Zero(dim)}; }
}  // namespace

TEST_CASE("relative energy density") {
  const ThermoModel pg = ThermoModel::perfect_gas(1.5);
  CHECK(rel_energy_density(pg, 2.0, 1.0, Vec::Zero(1), ref(1.0, 1.0)) ==
        doctest::Approx(oracle::kRelEnergyPg2vs1).epsilon(1e-14));
  CHECK(std::abs(rel_energy_density(pg, 1.7, 0.6, Vec::Zero(2), ref(1.7, 0.6, 2))) < 1e-14);
  Vec u(1);
  u << 0.4;
  const double base = rel_energy_density(pg, 1.0, 1.0, Vec::Zero(1), ref(1.0, 1.0));
  CHECK(rel_energy_density(pg, 1.0, 1.0, u, ref(1.0, 1.0)) == doctest::Approx(base + 0.08));

  SUBCASE("quadratic near the diagonal") {
    const ThermoModel mr = ThermoModel::molecular_radiation(MolecularKernel::log_tail(1.0), 0.1);
    auto E = [&](double t) { return rel_energy_density(mr, 1.2 * (1 + 0.3 * t), 0.8 * (1 - 0.2 * t), Vec::Zero(1), ref(1.2, 0.8)); };
    CHECK(E(1e-3) / E(5e-4) == doctest::Approx(4.0).epsilon(1e-2));
  }
}

TEST_CASE("Bregman form") {
  for (const ThermoModel& m : {ThermoModel::perfect_gas(1.5),
                               ThermoModel::molecular_radiation(MolecularKernel::log_tail(1.0), 0.1),
                               ThermoModel::molecular_radiation(MolecularKernel::linear(), 0.1)}) {
    const BregmanReport r = bregman_equivalence_check(m, 1000, 11);
    CHECK(r.samples == 1000);
    CHECK(r.max_rel_gap <= 1e-9);
    CHECK(r.min_value >= -1e-12);
  }
}

TEST_CASE("cutoff and split") {
  const CutoffParams c{0.1};
  CHECK(c.chi(1.0, 1.0) == 1.0);
  CHECK(c.chi(0.01, 1.0) == 0.0);
  CHECK(c.chi(1.0, 50.0) == 0.0);
  const double mid = c.chi(0.07, 1.0);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  const EssRes s = ess_res_split(2.0, c, 0.07, 1.0);
  CHECK(s.ess + s.res == doctest::Approx(2.0));
  CHECK(s.ess == doctest::Approx(2.0 * mid));
}

TEST_CASE("coercivity") {
  const ThermoModel m = ThermoModel::molecular_radiation(MolecularKernel::log_tail(1.0), 0.1);
  Vec U(2);
  U << 0.1, 0.1;
  const StrongState s{1.0, 1.0, U};
  const CoercivityReport a = coercivity_check(m, CutoffParams{0.1}, s, 100000, 5);
  CHECK(a.samples == 100000);
  CHECK(a.violations == 0);
  CHECK(a.c_found > 0.0);
  const CoercivityReport b = coercivity_check(m, CutoffParams{0.02}, s, 100000, 5);
  CHECK(b.c_found < a.c_found);
}

TEST_CASE("remainder R2") {
  const Models md{ThermoModel::perfect_gas(1.5), TransportModel::affine_theta(0.1, 0.1, 0.1)};
  const StrongSolution s = manufactured("shear", 1, md.thermo, md.transport);
  const Grid g = Grid::line(32);
  const std::vector<double> times{0.05};
  const AtomicYoungMeasure V = dirac_from_strong(s, g, times);
  CHECK(remainder_R2(V, 0, s, md).max_abs() < 1e-13);

  const R2Smallness r = r2_smallness(md, s, g, 0.05, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3});
  CHECK(r.integral.size() == 5);
  CHECK(r.slope >= 1.9);
  CHECK(r.slope <= 2.1);
  CHECK_THROWS_AS(r2_smallness(md, s, g, 0.05, {1e-2}), ConfigError);
  CHECK_THROWS_AS(r2_smallness(md, s, g, 0.05, {1e-2, 0.0}), ConfigError);
}

TEST_CASE("Gronwall fit") {
  std::vector<double> t, E;
  for (int k = 0; k <= 30; ++k) {
    t.push_back(0.01 * k);
    E.push_back(1e-4 * std::exp(2.0 * t.back()));
  }
  const GronwallFit f = fit_gronwall(t, E);
  CHECK(f.C == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.max_ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.ok);
  E[15] *= 2.0;
  CHECK_FALSE(fit_gronwall(t, E).ok);
}
