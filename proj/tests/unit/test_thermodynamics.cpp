#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "nsf/errors.hpp"
#include "nsf/thermodynamics.hpp"

using namespace nsf;

// Frozen from tools/oracles/frozen_values.py (mpmath, 50 digits).
namespace oracle {
constexpr double ballistic_pg_2_1 = 4.386294361119891;  // 3 + 2 log 2
constexpr double dE_drho_pg_1_0 = 2.5;
struct Kernel {
  double q, P, dP, S, dS, G;
};
constexpr Kernel log_tail[] = {
    {1e-3, 0.0008579579054559674, 0.8238692363660063, 7.193685818395112, -909.0909090909091, 0.6060606060606061},
    {1.0, 1.3862943611198906, 1.977157268533151, 2.0794415416798357, -0.5, 0.3333333333333333},
    {1e3, 100062.03596086497, 166.7094538741689, 0.2859305394129746, -9.09090909090909e-05, 0.06060606060606061},
    {1e9, 1000000000666167.1, 1666666.6671109444, 0.0029985009992505997, -9.99000999000999e-13, 0.000666000666000666},
};
constexpr double mr_p = 3.464794804582392, mr_e = 2.5923461034367943, mr_s = 1.3864238843581236;
constexpr double mr_p_rho = 2.746669068811911, mr_p_theta = 0.818959610040493;
constexpr double mr_e_theta = 0.5892197075303698, mr_s_rho = -0.20473990251012325;
}  // namespace oracle

namespace {
ThermoModel mr_log(double a) { return ThermoModel::molecular_radiation(MolecularKernel::log_tail(1.0), a); }
}  // namespace

TEST_CASE("perfect gas at the reference state") {
  const ThermoEval v = eval(ThermoModel::perfect_gas(1.5), {1.0, 1.0});
  CHECK(v.p == 1.0);
  CHECK(v.e == 1.5);
  CHECK(v.s == 0.0);
}

TEST_CASE("radiation-only gas") {
  const ThermoModel m = ThermoModel::molecular_radiation(MolecularKernel::zero(), 1.0);
  const ThermoEval v = eval(m, {2.0, 1.0});
  CHECK(v.p == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.e == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.s == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evaluation is deterministic") {
  const ThermoModel m = mr_log(0.1);
  const ThermoEval a = eval(m, {0.7, 1.3}), b = eval(m, {0.7, 1.3});
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("log-tail kernel against the arbitrary-precision oracle") {
  const MolecularKernel k = MolecularKernel::log_tail(1.0);
  for (const auto& o : oracle::log_tail) {
    CAPTURE(o.q);
    const KernelEval v = k(o.q);
    CHECK(v.P == doctest::Approx(o.P).epsilon(1e-13));
    CHECK(v.dP == doctest::Approx(o.dP).epsilon(1e-13));
    CHECK(v.S == doctest::Approx(o.S).epsilon(1e-13));
    CHECK(v.dS == doctest::Approx(o.dS).epsilon(1e-13));
    CHECK(v.G_over_q == doctest::Approx(o.G).epsilon(1e-13));
  }
}

TEST_CASE("molecular-radiation state and partials against the oracle") {
  const ThermoEval v = eval(mr_log(0.1), {2.0, 0.5});
  CHECK(v.p == doctest::Approx(oracle::mr_p).epsilon(1e-13));
  CHECK(v.e == doctest::Approx(oracle::mr_e).epsilon(1e-13));
  CHECK(v.s == doctest::Approx(oracle::mr_s).epsilon(1e-13));
  CHECK(v.p_rho == doctest::Approx(oracle::mr_p_rho).epsilon(1e-12));
  CHECK(v.p_theta == doctest::Approx(oracle::mr_p_theta).epsilon(1e-12));
  CHECK(v.e_theta == doctest::Approx(oracle::mr_e_theta).epsilon(1e-12));
  CHECK(v.s_rho == doctest::Approx(oracle::mr_s_rho).epsilon(1e-12));
}

TEST_CASE("Gibbs residuals") {
  SUBCASE("perfect gas vanishes to round-off") {
    const GibbsResidual g = gibbs_residual(ThermoModel::perfect_gas(1.5), {3.7, 0.2});
    CHECK(std::abs(g.r_rho) < 1e-15);
    CHECK(std::abs(g.r_theta) < 1e-15);
  }
  SUBCASE("radiation only vanishes to round-off") {
    const GibbsResidual g = gibbs_residual(ThermoModel::molecular_radiation(MolecularKernel::zero(), 0.7), {0.4, 2.5});
    CHECK(std::abs(g.r_rho) < 1e-14);
    CHECK(std::abs(g.r_theta) < 1e-14);
  }
  SUBCASE("halving the difference step shrinks the mismatch about fourfold") {
    const ThermoModel m = mr_log(0.1);
    const double a = gibbs_residual(m, {0.8, 1.7}, 1e-3).fd_mismatch;
    const double b = gibbs_residual(m, {0.8, 1.7}, 5e-4).fd_mismatch;
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("suite bound on every shipped equation of state") {
    for (const ThermoModel& m : {ThermoModel::perfect_gas(1.5), ThermoModel::perfect_gas(3.0), mr_log(0.1), mr_log(1.0),
                                 ThermoModel::molecular_radiation(MolecularKernel::linear(), 0.1),
                                 ThermoModel::molecular_radiation(MolecularKernel::zero(), 1.0)}) {
      const GibbsSuiteReport r = gibbs_suite(m, 10000, 11);
      CHECK(r.max_r_rho <= 1e-8);
      CHECK(r.max_r_theta <= 1e-8);
    }
  }
  SUBCASE("central differences with h = 1e-5") {
    const ThermoModel m = mr_log(0.1);
    auto sweep = [&](double lo, bool log_derivatives) {
      std::mt19937_64 rng(5);
      std::uniform_real_distribution<double> U(std::log(lo), -std::log(lo));
      double worst = 0;
      for (int k = 0; k < 2000; ++k) {
        const double rho = std::exp(U(rng)), th = std::exp(U(rng));
        const ThermoEval v = eval(m, {rho, th});
        const GibbsResidual g = gibbs_residual(m, {rho, th}, 1e-5);
        const double scale = 1.0 + std::abs(v.e) + std::abs(th * v.s);
        const double wr = log_derivatives ? rho : 1.0, wt = log_derivatives ? th : 1.0;
        worst = std::max({worst, wr * std::abs(g.fd_r_rho) / scale, wt * std::abs(g.fd_r_theta) / scale});
      }
      return worst;
    };
    CHECK(sweep(0.1, false) <= 1e-6);
    // Below rho = 0.1 the step 1e-5 (1 + rho) is no longer small relative to rho.
    CHECK(sweep(1e-2, true) <= 1e-6);
  }
}

TEST_CASE("ballistic energy") {
  const ThermoModel pg = ThermoModel::perfect_gas(1.5);
  CHECK(ballistic_energy(pg, {1.0, 1.0}, 2.0) == doctest::Approx(1.5));
  CHECK(ballistic_energy(pg, {2.0, 1.0}, 1.0) == doctest::Approx(oracle::ballistic_pg_2_1).epsilon(1e-15));
  const ThermoModel m = mr_log(0.1);
  const ThermoEval v = eval(m, {0.3, 2.2});
  CHECK(ballistic_energy(m, {0.3, 2.2}, 2.2) == doctest::Approx(0.3 * (v.e - 2.2 * v.s)));
}

TEST_CASE("conservative energy and its partials") {
  const ThermoModel pg = ThermoModel::perfect_gas(1.5);
  ConservativeState c;
  c.rho = 1.0;
  c.S = 0.0;
  c.m = Vec::Zero(1);
  CHECK(conservative_energy(pg, c) == doctest::Approx(1.5));
  const ConservativePartials d = conservative_partials(pg, c);
  CHECK(d.dE_drho == doctest::Approx(oracle::dE_drho_pg_1_0).epsilon(1e-14));
  CHECK(d.dE_dS == doctest::Approx(1.0));

  SUBCASE("doubling momentum quadruples the kinetic part") {
    ConservativeState a = c, b = c;
    a.m = Vec::Constant(1, 0.3);
    b.m = Vec::Constant(1, 0.6);
    const double base = conservative_energy(pg, c);
    CHECK(conservative_energy(pg, b) - base == doctest::Approx(4.0 * (conservative_energy(pg, a) - base)));
  }
  SUBCASE("dE/dS equals the recovered temperature") {
    const ThermoModel m = mr_log(0.1);
    const ConservativeState s = to_conservative(m, {0.6, 1.9}, Vec::Zero(2));
    CHECK(conservative_partials(m, s).dE_dS == doctest::Approx(1.9).epsilon(1e-10));
  }
  SUBCASE("central differences agree to second order") {
    const ThermoModel m = mr_log(0.1);
    const ConservativeState s = to_conservative(m, {0.6, 1.9}, Vec::Constant(2, 0.2));
    const ConservativePartials d = conservative_partials(m, s);
    auto fd = [&](double h) {
      ConservativeState p = s, q = s;
      p.rho += h;
      q.rho -= h;
      return (conservative_energy(m, p) - conservative_energy(m, q)) / (2 * h);
    };
    const double e1 = std::abs(fd(1e-2) - d.dE_drho), e2 = std::abs(fd(5e-3) - d.dE_drho);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("entropy inversion round trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(std::log(1e-2), std::log(1e2));
    for (const ThermoModel& m : {pg, mr_log(0.1)}) {
      for (int k = 0; k < 500; ++k) {
        const double rho = std::exp(U(rng)), th = std::exp(U(rng));
        const double S = rho * eval(m, {rho, th}).s;
        CHECK(temperature_from_entropy(m, rho, S) == doctest::Approx(th).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("structural hypotheses") {
  CHECK(validate_structure(ThermoModel::perfect_gas(1.5), 10000).pass);
  CHECK(validate_structure(ThermoModel::molecular_radiation(MolecularKernel::linear(), 0.1), 10000).pass);
  CHECK(validate_structure(mr_log(0.1), 10000).pass);
  const StructureReport bad = validate_structure(ThermoModel::perfect_gas(-1.0), 1000);
  CHECK_FALSE(bad.pass);
  CHECK(bad.stability_violations > 0);
  CHECK(bad.witness_rho > 0.0);
  CHECK_FALSE(bad.first_violation.empty());
}

TEST_CASE("gate-checked construction") {
  ThermoSpec s;
  s.kind = "perfect_gas";
  s.c_v = 1.0;
  CHECK_THROWS_AS(make_thermo(s), GateError);
  s.c_v = 1.5;
  CHECK_NOTHROW(make_thermo(s));
  s.kind = "molecular_radiation";
  s.radiation = "stefan_boltzmann";
  CHECK_THROWS_AS(make_thermo(s), GateError);
  s.kind = "van_der_waals";
  CHECK_THROWS(make_thermo(s));
}

TEST_CASE("entropy growth bound") {
  const ThermoModel m = mr_log(0.1);
  const EntropyBound one = entropy_growth_bound(m, {1.0, 1.0}, 3.0);
  CHECK(one.rhs == doctest::Approx(3.0));
  CHECK(one.lhs <= one.rhs);
  CHECK(entropy_growth_bound(m, {std::exp(1.0), 1.0}, 1.0).rhs == doctest::Approx(2.0 * std::exp(1.0)));
  const ThermoModel lin = ThermoModel::molecular_radiation(MolecularKernel::linear(), 0.1);
  const double c = calibrate_entropy_bound(lin, 1e-3, 1e3, 61);
  CHECK(c > 0.0);
  for (int k = 0; k <= 60; ++k) {
    const double rho = std::pow(10.0, -3.0 + 0.1 * k);
    const EntropyBound b = entropy_growth_bound(lin, {rho, 1.0}, c);
    CHECK(b.lhs <= b.rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("invalid states are rejected") {
  CHECK_THROWS_AS(eval(ThermoModel::perfect_gas(1.5), {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(eval(ThermoModel::perfect_gas(1.5), {1.0, -1.0}), DomainError);
}
