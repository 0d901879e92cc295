#include <doctest.h>

#include <cmath>
#include <random>

#include "coulomb/limits.hpp"
#include "coulomb/special.hpp"

using namespace coulomb;

namespace {

std::vector<std::pair<Complex, Complex>> random_pairs(std::size_t count, double box, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<std::pair<Complex, Complex>> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
  return out;
}

}  // namespace

TEST_CASE("ginibre kernel") {
  for (auto [z, w] : random_pairs(50, 3.0, 7)) {
    CHECK(std::abs(ginibre_G(z, z) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(ginibre_G(z, w)) - std::exp(-0.5 * std::norm(z - w))) < 1e-14);
    CHECK(std::abs(ginibre_G(z, w) - std::conj(ginibre_G(w, z))) < 1e-15);
  }
  for (Complex z : {Complex(0, 0), Complex(1.5, -0.3), Complex(-4, 2)})
    CHECK(std::abs(ginibre_mass(z) - 1.0) < 1e-8);
}

TEST_CASE("translation-invariant kernels") {
  const PlasmaParams inf = PlasmaParams::ginibre(), zero{0.0};
  for (auto [z, w] : random_pairs(50, 3.0, 11))
    CHECK(std::abs(kernel_Km(inf, z, w) - ginibre_G(z, w)) < 1e-15);
  for (double x : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
    CHECK(std::abs(kernel_Km(zero, x, x) - plasma_F(2 * x)) < 1e-14);
    CHECK(std::abs(one_point_Km(zero, x) - plasma_F(2 * x).real()) < 1e-14);
  }
  // off-diagonal estimate through the scaled Dawson function
  for (double m : {0.0, 1.0, -0.7}) {
    const PlasmaParams pp{m};
    for (auto [z, w] : random_pairs(200, 3.0, 13)) {
      const Complex d = z - w;
      const double bound = std::exp(-0.5 * std::norm(d)) +
                           std::exp(-0.5 * d.real() * d.real()) * std::abs(dawson_H(d.imag()));
      CHECK(std::abs(kernel_Km(pp, z, w)) <= bound + 1e-12);
    }
  }
}

TEST_CASE("berezin kernels") {
  const PlasmaParams inf = PlasmaParams::ginibre(), zero{0.0};
  for (auto [z, w] : random_pairs(100, 3.0, 17)) {
    CHECK(berezin_Bm(zero, z, w) >= 0.0);
    CHECK(berezin_Bm(inf, z, w) == doctest::Approx(std::exp(-std::norm(z - w))).epsilon(1e-13));
  }
  CHECK(std::abs(berezin_mass(zero, 0.0) - 1.0) < 1e-4);
  for (Complex z : {Complex(-1, 0.5), Complex(0.5, 2), Complex(1.5, -1), Complex(-3, 0)})
    CHECK(std::abs(berezin_mass(zero, z) - 1.0) < 1e-4);
}

TEST_CASE("mass-one profile") {
  const PlasmaParams inf = PlasmaParams::ginibre(), zero{0.0};
  for (double L : {0.5, 1.0, 2.0, 3.0})
    for (Complex z : {Complex(0, 0), Complex(2, -1)})
      CHECK(std::abs(mass_one_mu(inf, z, L) - (1.0 - std::exp(-L * L))) < 1e-6);
  double prev = 0.0;
  for (double L : {0.5, 1.0, 2.0, 4.0, 6.0, 9.0}) {
    const double mu = mass_one_mu(zero, 0.5, L);
    CHECK(mu >= prev);
    CHECK(mu < 1.0);
    prev = mu;
  }
  // at finite m the mass outside D(z, L) decays like 1/L along the boundary
  // direction, not like a Gaussian
  const DiskQuadrature fine{192, 512};
  const double t6 = 6.0 * (1.0 - mass_one_mu(zero, 0.0, 6.0, fine));
  const double t12 = 12.0 * (1.0 - mass_one_mu(zero, 0.0, 12.0, fine));
  CHECK(t12 == doctest::Approx(t6).epsilon(0.15));
}

TEST_CASE("ward residual") {
  const auto zs = disk_lattice(2.0, 1.0);
  const WardReport inf = ward_residual(PlasmaParams::ginibre(), zs, {}, false);
  CHECK(inf.max_residual <= 1e-6);
  const std::vector<Complex> axis{{0, -2}, {0, -1}, {0, 0}, {0, 1}, {0, 2}};
  const WardReport zero = ward_residual(PlasmaParams{0.0}, axis, {}, false);
  CHECK(zero.max_residual <= 5e-2);
}

TEST_CASE("property: plasma representation and positivity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const Complex z(u(rng), 0.5 * u(rng));
    const double m = 0.5 * u(rng);
    CHECK(std::abs(phi_by_quadrature(z, m) - plasma_F(z - m)) < 1e-8);
  }
  for (double m : {-3.0, 0.0, 2.5})
    for (double x = -8; x <= 8; x += 0.25)
      for (double y : {-5.0, 0.0, 5.0}) CHECK(one_point_Km(PlasmaParams{m}, Complex(x, y)) > 0.0);
  for (double x = -6; x <= 6; x += 0.01) {
    const double step = x < 0 ? 1.0 : 0.0;
    CHECK(std::abs(plasma_F(2 * x).real() - step) <= std::exp(-x * x) + 1e-15);
  }
}
