#include <doctest.h>

#include <cmath>
#include <random>

#include "coulomb/special.hpp"

using coulomb::Complex;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Trapezoid on a truncated line: int_{-inf}^0 gamma(x - t) dt for real x,
// with gamma the standard normal density.
double plasma_by_quadrature(double x) {
  const int steps = 400000;
  const double lo = -40.0, h = -lo / steps;
  double s = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = lo + i * h;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    s += w * std::exp(-0.5 * (x - t) * (x - t));
  }
  return s * h / std::sqrt(2 * coulomb::kPi);
}

}  // namespace

TEST_CASE("complex erfc against high-precision values") {
  // reference values computed with 30-digit arithmetic
  struct Row {
    Complex z, v;
  } rows[] = {
      {{0, 0}, {1, 0}},
      {{1, 0}, {0.157299207050285130658779364917, 0}},
      {{2, 0}, {0.00467773498104726583793074363275, 0}},
      {{-1.5, 0}, {1.96610514647531072706697626165, 0}},
      {{1, 2}, {1.53664356577856503399179555931, 5.04914370344703466954303695861}},
      {{-2, 3}, {-19.829461427614568389103088452, -8.68731827147016314442807875454}},
      {{0.5, -9}, {-3.41775654476455216957301633942e+33, -6.54921981528754851339075065126e+33}},
      {{4, 10}, {1.3994510467459825013656084962e+35, 7.53907073505305222051088526834e+34}},
      {{3, -0.5}, {-0.0000280653614764048850160595879505, -0.000000262848972225882313958838584404}},
  };
  for (const auto& r : rows) CHECK(rel(coulomb::erfc(r.z), r.v) < 1e-10);
}

TEST_CASE("plasma function") {
  CHECK(std::abs(coulomb::plasma_F(0.0) - 0.5) < 1e-15);
  CHECK(coulomb::plasma_F(2.0).real() == doctest::Approx(0.0227501319481792072).epsilon(1e-12));
  CHECK(coulomb::plasma_F(2.0).real() == doctest::Approx(plasma_by_quadrature(2.0)).epsilon(1e-7));
  for (double x : {0.1, 0.7, 1.9, 3.3, 6.0}) {
    CHECK(std::abs(coulomb::plasma_F(x) + coulomb::plasma_F(-x) - 1.0) < 1e-14);
    CHECK(coulomb::plasma_F(x).real() == doctest::Approx(plasma_by_quadrature(x)).epsilon(1e-6));
  }
  CHECK(coulomb::plasma_F_checked(Complex(0, 9.9)).in_window);
  CHECK_FALSE(coulomb::plasma_F_checked(Complex(0, 10.5)).in_window);
}

TEST_CASE("property: entire function symmetry F(conj z) = conj F(z)") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-6, 6);
  for (int i = 0; i < 200; ++i) {
    const Complex z(u(rng), u(rng));
    CHECK(rel(coulomb::plasma_F(std::conj(z)), std::conj(coulomb::plasma_F(z))) < 1e-12);
    // reflection F(z) + F(-z) = 1 holds off the real axis too
    CHECK(std::abs(coulomb::plasma_F(z) + coulomb::plasma_F(-z) - 1.0) <= 1e-12 * std::max(1.0, std::abs(coulomb::plasma_F(z))));
  }
}

TEST_CASE("scaled dawson function") {
  CHECK(coulomb::dawson_H(0.0) == 0.0);
  const double ref[][2] = {{0.5, 0.183650797877978903254545599542},
                           {1, 0.289144771222119325661998481651},
                           {3, 0.156850891353145691067686749738},
                           {10, 0.040305783139727330510885922172},
                           {50, 0.00798204098379897334587109694579}};
  for (const auto& r : ref) {
    CHECK(coulomb::dawson_H(r[0]) == doctest::Approx(r[1]).epsilon(1e-10));
    CHECK(coulomb::dawson_H(-r[0]) == -coulomb::dawson_H(r[0]));
  }
  double sup = 0;
  for (int i = -50000; i <= 50000; ++i) {
    const double t = i * 1e-3;
    sup = std::max(sup, (1 + std::abs(t)) * std::abs(coulomb::dawson_H(t)));
  }
  CHECK(sup <= 1.1);
}
