#include <doctest.h>

#include <cmath>
#include <random>

#include "nsf/errors.hpp"
#include "nsf/transport.hpp"

using namespace nsf;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Mat random_mat(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> N;
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = N(rng);
  return m;
}

}  // namespace

TEST_CASE("symmetric and traceless parts") {
  for (int d : {1, 2, 3}) CHECK(traceless_sym(Mat::Identity(d, d)).norm() < 1e-15);
  const Mat A = mat2(0, 1, 0, 0);
  const Mat expected = mat2(0, 0.5, 0.5, 0);
  CHECK((sym_part(A) - expected).norm() < 1e-15);
  CHECK((traceless_sym(A) - expected).norm() < 1e-15);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) CHECK(std::abs(traceless_sym(random_mat(rng, 3)).trace()) < 1e-14);
}

TEST_CASE("viscous stress") {
  const TransportModel m = TransportModel::affine_theta(1.0, 0.0, 1.0);
  CHECK(viscous_stress(m, {1.0, 1.0}, Mat::Zero(2, 2)).norm() == 0.0);
  CHECK(viscous_stress(m, {1.0, 1.0}, Mat::Identity(2, 2)).norm() < 1e-15);
  const Mat S = viscous_stress(m, {1.0, 1.0}, mat2(0, 1, 0, 0));
  CHECK((S - mat2(0, 1, 1, 0)).norm() < 1e-15);

  SUBCASE("dissipation is nonnegative") {
    const TransportModel p = TransportModel::power_kappa(0.5, 0.2, 0.1, 0.3, 1.0, 0.5, 2.0);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 1000; ++k) {
      const Mat G = random_mat(rng, 3);
      CHECK(ddot(viscous_stress(p, {1.0, 0.7}, G), G) >= 0.0);
    }
  }
}

TEST_CASE("heat flux") {
  const TransportModel m = TransportModel::power_kappa(1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0);
  CHECK(heat_flux(m, {1.0, 1.0}, Vec::Zero(2)).norm() == 0.0);
  Vec g(2);
  g << 1.0, 0.0;
  const Vec q = heat_flux(m, {1.0, 1.0}, g);
  CHECK(q[0] == doctest::Approx(-2.0));
  CHECK(q[1] == 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int k = 0; k < 100; ++k) {
    Vec v(3);
    v << N(rng), N(rng), N(rng);
    CHECK(heat_flux(m, {1.0, std::exp(N(rng))}, v).dot(v) <= 0.0);
  }
}

TEST_CASE("kappa primitive") {
  const TransportModel m = TransportModel::power_kappa(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 2.0);
  CHECK(kappa_primitive(m, 1.0) == 0.0);
  // Frozen from tools/oracles/frozen_values.py.
  CHECK(kappa_primitive(m, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  const TransportModel p = TransportModel::power_kappa(1.0, 0.0, 0.0, 0.0, 0.3, 0.7, 2.5);
  for (double th : {0.2, 1.0, 3.0}) {
    auto fd = [&](double h) { return (kappa_primitive(p, th + h) - kappa_primitive(p, th - h)) / (2 * h); };
    const double exact = coefficients(p, 1.0, th).kappa / th;
    const double e1 = std::abs(fd(1e-2) - exact), e2 = std::abs(fd(5e-3) - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
  CHECK(kappa_integral_inverse(p, kappa_integral(p, 2.7)) == doctest::Approx(2.7).epsilon(1e-12));
}

TEST_CASE("entropy production") {
  const TransportModel m = TransportModel::affine_theta(1.0, 0.5, 1.0);
  CHECK(entropy_production_density(m, {1.0, 1.0}, Mat::Zero(2, 2), Vec::Zero(2)) == 0.0);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  for (int k = 0; k < 10000; ++k) {
    const Mat D = sym_part(random_mat(rng, 2));
    Vec g(2);
    g << N(rng), N(rng);
    CHECK(entropy_production_density(m, {1.0, std::exp(N(rng))}, D, g) >= 0.0);
  }
  Vec g(2);
  g << 0.3, -0.4;
  const double c1 = entropy_production_density(m, {1.0, 1.3}, Mat::Zero(2, 2), g);
  const double c2 = entropy_production_density(m, {1.0, 1.3}, Mat::Zero(2, 2), 2.0 * g);
  CHECK(c2 == doctest::Approx(4.0 * c1));
}

TEST_CASE("uniqueness-mode gate") {
  TransportSpec s;
  s.kind = "power_kappa";
  s.beta = 2.5;
  s.uniqueness_mode = true;
  try {
    make_transport(s);
    FAIL("beta > 2 accepted");
  } catch (const GateError& e) {
    CHECK(std::string(e.what()).find("does not allow us to prove") != std::string::npos);
  }
  s.uniqueness_mode = false;
  CHECK_NOTHROW(make_transport(s));
  s.beta = 2.0;
  s.uniqueness_mode = true;
  CHECK_NOTHROW(make_transport(s));
}

TEST_CASE("bounded class has no law") {
  const TransportModel b = TransportModel::bounded_general(TransportEnvelope{});
  CHECK_THROWS_AS(coefficients(b, 1.0, 1.0), DomainError);
}

TEST_CASE("envelope check") {
  TransportEnvelope env;
  env.mu_lo = 0.09;
  env.kappa_lo = 0.045;
  env.beta = 3.0;
  const TransportModel ok = TransportModel::power_kappa(0.1, 0.1, 0.1, 0.1, 0.1, 0.05, 3.0);
  CHECK(check_envelope(ok, env).pass);
  const TransportModel weak = TransportModel::power_kappa(0.01, 0.01, 0.0, 0.0, 0.1, 0.05, 3.0);
  const EnvelopeReport r = check_envelope(weak, env);
  CHECK_FALSE(r.pass);
  CHECK(r.witness_theta > 0.0);
}
