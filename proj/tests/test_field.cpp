#include <doctest.h>

#include <random>

#include "hhgwm/config.hpp"
#include "hhgwm/dipole.hpp"
#include "hhgwm/errors.hpp"
#include "hhgwm/field.hpp"

using namespace hhgwm;

namespace {

FieldConfig two_color(real eps, real phi) {
  FieldConfig c;
  c.epsilon = eps;
  c.phi = phi;
  return c;
}

}  // namespace

TEST_CASE("vector potentials at reference points") {
  const TwoColorField f(two_color(0.01, pi / 2));
  const real w = 0.057;
  // mpmath references (tests/oracles/golden_values.py)
  CHECK(vector_potential_w(f, pi / 2 / w).real() == doctest::Approx(-0.92982456140350877).epsilon(1e-14));
  CHECK(vector_potential_2w(f, 0.0).real() == doctest::Approx(-0.0046491228070175439).epsilon(1e-14));
  CHECK(ponderomotive_energy(FieldConfig{}) == doctest::Approx(0.21614342874730686).epsilon(1e-14));
}

TEST_CASE("single color: A_2w vanishes identically") {
  const TwoColorField f(two_color(0.0, 1.3));
  for (real t : {0.0, 10.0, 77.7}) {
    CHECK(f.a_2w(t) == 0.0);
    CHECK(f.e_2w(t) == 0.0);
  }
  CHECK_FALSE(f.has_second_color());
}

TEST_CASE("E = -dA/dt for complex times") {
  const TwoColorField f(two_color(0.01, 0.7));
  std::mt19937 rng(5);
  std::uniform_real_distribution<real> u(0.0, 110.0), v(-20.0, 20.0);
  for (int k = 0; k < 20; ++k) {
    const cplx t{u(rng), v(rng)};
    const real h = 1e-5;
    const cplx dw = (f.a_w(t + h) - f.a_w(t - h)) / (2 * h);
    const cplx d2 = (f.a_2w(t + h) - f.a_2w(t - h)) / (2 * h);
    CHECK(std::abs(f.e_w(t) + dw) <= 1e-8 * std::max(1.0, std::abs(dw)));
    CHECK(std::abs(f.e_2w(t) + d2) <= 1e-8 * std::max(1.0, std::abs(d2)));
  }
}

TEST_CASE("enveloped field is -d(fA)/dt") {
  FieldConfig c = two_color(0.01, 0.3);
  const TwoColorField f(c);
  for (real t : {13.0, 200.0, 451.0, 700.0}) {
    const real h = 1e-4;
    auto fa = [&](real s) { return f.envelope(s) * (f.a_w(s) + f.a_2w(s)); };
    const real ref = -(fa(t + h) - fa(t - h)) / (2 * h);
    CHECK(electric_field(f, t, true).total == doctest::Approx(ref).epsilon(1e-7));
  }
  // without the envelope the components add up
  const auto s = electric_field(f, 31.0, false);
  CHECK(s.total == doctest::Approx(f.e_w(31.0) + f.e_2w(31.0)));
}

TEST_CASE("envelope shapes") {
  FieldConfig c;
  const TwoColorField sin2(c);
  CHECK(sin2.envelope(0.0) == doctest::Approx(0.0));
  CHECK(sin2.envelope(sin2.duration() / 2) == doctest::Approx(1.0));
  CHECK(sin2.envelope(-1.0) == 0.0);
  CHECK(sin2.envelope(sin2.duration() + 1.0) == 0.0);
  c.envelope_shape = Envelope::flat;
  const TwoColorField flat(c);
  CHECK(flat.envelope(1.0) == 1.0);
  CHECK(flat.envelope_derivative(1.0) == 0.0);
}

TEST_CASE("quadrature form reproduces the classical two-color drive") {
  for (real phi : {0.0, 0.4, 2.0, 4.5}) {
    const FieldConfig c = two_color(0.01, phi);
    const TwoColorField f(c);
    const real e2 = 0.01 * c.E_omega;
    for (real t : {0.0, 17.0, 55.5}) {
      CHECK(f.a_2w(t) == doctest::Approx(-(e2 / (2 * c.omega)) * std::sin(2 * c.omega * t + phi)).epsilon(1e-13));
      CHECK(f.e_2w(t) == doctest::Approx(e2 * std::cos(2 * c.omega * t + phi)).epsilon(1e-13));
    }
    const auto g = TwoColorField::with_quadratures(c, e2 * std::cos(phi), e2 * std::sin(phi));
    CHECK(std::abs(g.a_2w(cplx{3.0, 1.0}) - f.a_2w(cplx{3.0, 1.0})) < 1e-15);
  }
}

TEST_CASE("phi is periodic") {
  const TwoColorField a(two_color(0.01, 0.9)), b(two_color(0.01, 0.9 + two_pi));
  for (real t : {1.0, 40.0}) CHECK(a.a_2w(t) == doctest::Approx(b.a_2w(t)).epsilon(1e-12));
  CHECK(validated(two_color(0.01, -0.5)).phi == doctest::Approx(two_pi - 0.5));
}

TEST_CASE("invalid field configurations throw") {
  FieldConfig c;
  c.E_omega = -1.0;
  CHECK_THROWS_AS(validated(c), ConfigError);
  c = FieldConfig{};
  c.omega = 0.0;
  CHECK_THROWS_AS(validated(c), ConfigError);
  c = FieldConfig{};
  c.n_cycles = 0;
  CHECK_THROWS_AS(validated(c), ConfigError);
  c = FieldConfig{};
  c.epsilon = -0.1;
  CHECK_THROWS_AS(validated(c), ConfigError);
  CHECK_THROWS_AS(validate(SqueezeConfig{-1.0, SqueezeAxis::x}), ConfigError);
}

TEST_CASE("tunnel correction: phi = 0 identity and pole guard") {
  const real eps = 0.01;
  const TwoColorField f(two_color(eps, 0.0));
  std::mt19937 rng(11);
  std::uniform_real_distribution<real> u(0.01, 100.0);
  for (int k = 0; k < 50; ++k) {
    const real t1 = u(rng);
    if (std::abs(std::sin(0.057 * t1)) < 1e-3) continue;
    CHECK(std::abs(tunnel_correction(f, t1) - 2 * eps * std::cos(0.057 * t1)) < 1e-12);
  }
  CHECK_THROWS_AS(tunnel_correction(f, 0.0), PoleProximity);
  CHECK_THROWS_AS(tunnel_correction(f, pi / 0.057), PoleProximity);
}
