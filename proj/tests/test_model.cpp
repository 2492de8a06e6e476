#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nlz/model.hpp"

using namespace nlz;
using std::numbers::pi;

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());

  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.alpha = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = ModelParams{};
  p.sweep_rate = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = ModelParams{};
  p.gamma_start = 1.0;
  p.gamma_end = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.gamma_end = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("state norms and intensity") {
  QuantumState psi;
  CHECK(psi.norm2() == doctest::Approx(1.0));
  CHECK(psi.intensity() == doctest::Approx(1.0));

  psi = {{0.6, 0.0}, {0.0, 0.8}};
  CHECK(psi.norm2() == doctest::Approx(1.0));
  CHECK(psi.intensity() == doctest::Approx(0.36));
}

TEST_CASE("hamiltonian uses the instantaneous intensity") {
  ModelParams p;
  p.alpha = 1.0;
  p.beta = -2.0;
  const QuantumState psi{{0.6, 0.0}, {0.0, 0.8}};
  const auto H = hamiltonian(p, 0.3, psi);
  CHECK(H.gamma == doctest::Approx(0.3));
  CHECK(H.coupling == doctest::Approx(1.0 - 2.0 * 0.36));

  // H psi = (gamma*a + c*b, c*a - gamma*b) with a = 0.6, b = 0.8i, c = 0.28.
  const auto out = H.apply(psi);
  CHECK(out.a.real() == doctest::Approx(0.18));
  CHECK(out.a.imag() == doctest::Approx(0.224));
  CHECK(out.b.real() == doctest::Approx(0.168));
  CHECK(out.b.imag() == doctest::Approx(-0.24));
}

TEST_CASE("energy expectation matches its Bloch form") {
  // <H> = -gamma*s + sqrt(1-s^2)*cos(theta)*(alpha + beta*(1-s)/2)
  ModelParams p;
  p.alpha = 1.3;
  p.beta = -0.7;
  for (const double s : {-0.8, -0.2, 0.0, 0.5, 0.9}) {
    for (const double th : {0.0, 0.4, 2.0, -2.5, pi}) {
      const QuantumState psi = from_bloch({s, th, false});
      const double gamma = 0.37;
      const double c = p.alpha + p.beta * (1.0 - s) / 2.0;
      const double expected = -gamma * s + std::sqrt(1.0 - s * s) * std::cos(th) * c;
      CHECK(dynamical_energy(p, gamma, psi) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("bloch round trip and gauge") {
  for (const double s : {-0.95, -0.3, 0.0, 0.42, 0.99}) {
    for (const double th : {-3.0, -1.0, 0.0, 1.5, pi}) {
      const QuantumState psi = from_bloch({s, th, false});
      CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(psi.a.imag() == doctest::Approx(0.0));  // gauge arg(a) = 0
      const BlochCoords back = to_bloch(psi);
      CHECK(back.s == doctest::Approx(s).epsilon(1e-12));
      CHECK(back.theta == doctest::Approx(th).epsilon(1e-12));
      CHECK_FALSE(back.degenerate);
    }
  }
}

TEST_CASE("relative phase is reduced to (-pi, pi]") {
  // theta = arg(b) - arg(a) with a rotated by a global phase stays invariant.
  const QuantumState base = from_bloch({0.2, 2.5, false});
  const std::complex<double> rot = std::polar(1.0, 2.0);
  const QuantumState rotated{base.a * rot, base.b * rot};
  CHECK(to_bloch(rotated).theta == doctest::Approx(2.5).epsilon(1e-12));

  // arg(b) - arg(a) = -pi wraps to +pi.
  const QuantumState anti{{std::sqrt(0.5), 0.0}, {-std::sqrt(0.5), 0.0}};
  CHECK(to_bloch(anti).theta == doctest::Approx(pi));
}

TEST_CASE("poles are flagged degenerate") {
  const BlochCoords lower = to_bloch(QuantumState{{1.0, 0.0}, {0.0, 0.0}});
  CHECK(lower.s == doctest::Approx(-1.0));
  CHECK(lower.degenerate);
  CHECK(lower.theta == doctest::Approx(0.0));

  const BlochCoords upper = to_bloch(QuantumState{{0.0, 0.0}, {0.0, 1.0}});
  CHECK(upper.s == doctest::Approx(1.0));
  CHECK(upper.degenerate);

  // Near-pole states below the degeneracy threshold stay non-degenerate.
  const BlochCoords near = to_bloch(from_bloch({-0.999999, 1.0, false}));
  CHECK_FALSE(near.degenerate);
}
