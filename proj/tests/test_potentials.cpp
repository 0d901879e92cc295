#include <doctest.h>

#include <cmath>
#include <random>

#include "coulomb/potentials.hpp"

using coulomb::Complex;
using coulomb::Potential;

namespace {

Complex fd_grad(const Potential& q, Complex z, double h) {
  return {(q(z + h) - q(z - h)) / (2 * h), (q(z + Complex(0, h)) - q(z - Complex(0, h))) / (2 * h)};
}

double fd_lap(const Potential& q, Complex z, double h) {
  const double s = q(z + h) + q(z - h) + q(z + Complex(0, h)) + q(z - Complex(0, h)) - 4 * q(z);
  return s / (4 * h * h);
}

}  // namespace

TEST_CASE("values of the built-in potentials") {
  CHECK(coulomb::eval_potential(Potential::ginibre(), 1.0) == doctest::Approx(1.0));
  CHECK(Potential::ellipse(0.5)(1.0) == doctest::Approx(0.5));
  CHECK(Potential::mittag_leffler(2)(0.0) == 0.0);
  CHECK(Potential::mittag_leffler(2)(Complex(0, 2)) == doctest::Approx(16.0));
}

TEST_CASE("gradients") {
  CHECK(std::abs(coulomb::grad(Potential::ginibre(), 0.0)) == 0.0);
  CHECK(std::abs(Potential::ginibre().grad(1.0) - Complex(2, 0)) < 1e-15);
  const Potential e = Potential::ellipse(0.5);
  const Complex g = e.grad(Complex(0, 1));
  CHECK(std::abs(g - Complex(0, 3)) < 1e-14);
  CHECK(std::abs(g - fd_grad(e, Complex(0, 1), 1e-5)) < 1e-8);
}

TEST_CASE("laplacians under the quarter convention") {
  CHECK(coulomb::laplacian(Potential::ginibre(), Complex(0.3, -2)) == 1.0);
  CHECK(Potential::ellipse(0.7).laplacian(Complex(2, 1)) == 1.0);
  const Potential ml = Potential::mittag_leffler(2);
  const Complex z = std::polar(1.0, 0.4);
  CHECK(ml.laplacian(z) == doctest::Approx(4.0));
  CHECK(fd_lap(ml, z, 1e-4) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("property: analytic gradient matches central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const Potential& q : {Potential::ginibre(), Potential::mittag_leffler(2),
                             Potential::mittag_leffler(3.5), Potential::ellipse(0.3),
                             Potential::ellipse(0.9)}) {
    for (int k = 0; k < 100; ++k) {
      const Complex z(u(rng), u(rng));
      const Complex g = q.grad(z);
      const Complex f = fd_grad(q, z, 1e-5);
      CHECK(std::abs(g - f) <= 1e-6 * std::max(1.0, std::abs(g)));
      CHECK(q.laplacian(z) >= 0.0);
    }
  }
}

TEST_CASE("property: ellipse and ginibre share the laplacian") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 3.0);
  const Potential g = Potential::ginibre();
  const Potential e = Potential::ellipse(0.42);
  for (int k = 0; k < 50; ++k) {
    const Complex z(n(rng), n(rng));
    CHECK(g.laplacian(z) == e.laplacian(z));
  }
}

TEST_CASE("custom potentials fall back to finite differences") {
  coulomb::CustomPotential spec;
  spec.name = "quartic";
  spec.value = [](Complex z) { return std::norm(z) * std::norm(z) / 2.0; };
  const Potential q = Potential::custom(spec);
  const Complex z(0.7, 0.2);
  // grad of r^4/2 is 2 r^2 z; Laplacian is 2 r^2
  CHECK(std::abs(q.grad(z) - 2.0 * std::norm(z) * z) < 1e-8);
  CHECK(q.laplacian(z) == doctest::Approx(2.0 * std::norm(z)).epsilon(1e-5));

  spec.in_domain = [](Complex w) { return w.real() > 0.0; };
  const Potential half = Potential::custom(spec);
  CHECK_THROWS_AS(half(Complex(-1, 0)), coulomb::DomainError);
}

TEST_CASE("constructor preconditions") {
  CHECK_THROWS_AS(Potential::mittag_leffler(0.5), std::invalid_argument);
  CHECK_THROWS_AS(Potential::ellipse(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Potential::ellipse(0.0), std::invalid_argument);
}

TEST_CASE("growth check") {
  auto rep = coulomb::growth_check(Potential::ginibre(), {10, 100});
  CHECK(rep.pass);
  // r^2 / (2 log r) at r = 10
  CHECK(rep.min_ratio[0] == doctest::Approx(100.0 / (2 * std::log(10.0))));
  auto el = coulomb::growth_check(Potential::ellipse(0.99), {10, 100});
  CHECK(el.pass);
  CHECK(el.min_ratio[0] == doctest::Approx(0.01 * 100 / (2 * std::log(10.0))).epsilon(1e-6));

  coulomb::CustomPotential logq;
  logq.name = "log";
  logq.value = [](Complex z) { return std::log(std::norm(z)); };
  CHECK_FALSE(coulomb::growth_check(Potential::custom(logq), {10}).pass);
  CHECK_THROWS_AS(coulomb::growth_check(Potential::ginibre(), {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(coulomb::growth_check(Potential::ginibre(), {10, 5}), std::invalid_argument);
}
