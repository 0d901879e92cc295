#include <doctest.h>

#include <cmath>
#include <random>

#include "coulomb/equilibrium.hpp"
#include "coulomb/kernels.hpp"
#include "coulomb/special.hpp"

using namespace coulomb;

namespace {

std::vector<Complex> random_points(std::size_t count, double box, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

}  // namespace

TEST_CASE("ginibre norms are gaussian moments") {
  const auto b = WeightedBasis::build(Potential::ginibre(), 50);
  double log_fact = 0.0;
  for (int k = 0; k <= 20; ++k) {
    if (k > 0) log_fact += std::log(double(k));
    const double exact = log_fact - (k + 1) * std::log(50.0);
    CHECK(std::abs(std::expm1(b.log_norms()[k] - exact)) < 1e-10);
  }
  CHECK(b.one_point(0.0) == doctest::Approx(50.0).epsilon(1e-8));
}

TEST_CASE("single-element basis") {
  for (auto pot : {Potential::ginibre(), Potential::mittag_leffler(2.0)}) {
    const auto b = WeightedBasis::build(pot, 1);
    std::vector<Complex> phi;
    for (Complex z : {Complex(0.2, 0.1), Complex(-0.7, 0.4)}) {
      b.eval(z, phi);
      REQUIRE(phi.size() == 1);
      CHECK(std::abs(phi[0] - std::exp(-0.5 * pot(z) - 0.5 * b.log_norms()[0])) < 1e-15);
    }
  }
}

TEST_CASE("ellipse basis is orthonormal on an independent grid") {
  const auto b = WeightedBasis::build(Potential::ellipse(0.5), 16);
  CHECK(gram_defect(b, b.grid()) < 1e-8);
  CHECK(gram_defect(b, cartesian_grid(-4, 4, -3, 3, 260, 250)) < 1e-8);
}

TEST_CASE("arnoldi path reproduces the radial kernel") {
  const auto pot = Potential::ginibre();
  const auto arn = WeightedBasis::build_on_grid(pot, 30, cartesian_grid(-2.2, 2.2, -2.2, 2.2, 200, 200));
  const auto rad = WeightedBasis::build(pot, 30);
  for (Complex z : random_points(10, 1.0, 3))
    CHECK(std::abs(arn.kernel(z, 0.5) - rad.kernel(z, 0.5)) < 1e-10 * rad.one_point(z));
}

TEST_CASE("kernel evaluation") {
  const KernelModel km(Potential::ginibre(), 50);
  const auto pts = random_points(100, 1.5, 5);
  for (Complex z : pts) CHECK(one_point(km, z) >= 0.0);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const Complex a = kernel_eval(km, pts[i], pts[i + 1]), b = kernel_eval(km, pts[i + 1], pts[i]);
    CHECK(std::abs(a - std::conj(b)) <= 1e-10 * std::max(1e-300, std::abs(a)));
  }
  for (Complex z : random_points(10, 1.2, 9)) {
    const double r = one_point(km, z);
    CHECK(std::abs(reproducing_integral(km, z) - r) <= 1e-6 * r);
  }
}

TEST_CASE("ellipse kernel: symmetry and reproducing identity") {
  const auto pot = Potential::ellipse(0.5);
  const KernelModel km(pot, 32);
  for (Complex z : random_points(5, 1.2, 31)) {
    const Complex w = 0.5 * z + Complex(0.2, -0.1);
    CHECK(std::abs(kernel_eval(km, z, w) - std::conj(kernel_eval(km, w, z))) < 1e-10);
    const double r = one_point(km, z);
    CHECK(std::abs(reproducing_integral(km, z) - r) <= 1e-6 * r);
  }
}

TEST_CASE("rescale frames") {
  const auto pot = Potential::ginibre();
  const auto d = droplet_for(pot);
  const auto f = rescale_frame(pot, d, 1.0, 100);
  CHECK(std::abs(f.theta) < 1e-12);
  CHECK(f.scale == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(rescale_frame(pot, d, Complex(0, 1), 100).theta == doctest::Approx(kPi / 2).epsilon(1e-12));
  for (Complex z : random_points(20, 1.0, 13)) CHECK(std::abs(f.inverse(f.forward(z)) - z) < 1e-14);
  CHECK_THROWS_AS(rescale_frame(Potential::mittag_leffler(2.0), droplet_for(Potential::mittag_leffler(2.0)), 0.0, 10),
                  DomainError);
}

TEST_CASE("rescaled one-point function") {
  const auto pot = Potential::ginibre();
  const auto d = droplet_for(pot);
  const KernelModel km(pot, 400);
  const auto bulk = rescale_frame(pot, d, 0.0, 400);
  const auto edge = rescale_frame(pot, d, 1.0, 400);
  CHECK(rescaled_one_point(km, bulk, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(rescaled_one_point(km, edge, 0.0) - 0.5) < 0.02);
  CHECK(rescaled_one_point(km, edge, 3.0) <= 0.01);
  for (double x = -3; x <= 3; x += 0.25) {
    CHECK(rescaled_one_point(km, edge, x) >= 0.0);
    CHECK(std::abs(rescaled_one_point(km, edge, x) - plasma_F(2 * x).real()) <= 0.05);
  }
  for (Complex z : random_points(10, 2.0, 17))
    CHECK(std::abs(rescaled_kernel(km, edge, z, z).real() - rescaled_one_point(km, edge, z)) < 1e-12);
  for (Complex z : random_points(8, 2.0, 19))
    for (Complex w : random_points(8, 2.0, 21)) {
      CHECK(std::abs(std::abs(rescaled_kernel(km, bulk, z, w)) - std::exp(-0.5 * std::norm(z - w))) <= 0.02);
      CHECK(std::abs(berezin(km, bulk, 0.0, w) - std::exp(-std::norm(w))) <= 0.02);
      CHECK(berezin(km, edge, z, w) >= 0.0);
    }
  // bulk density estimate
  for (double r : {0.0, 0.3, 0.6, 0.74}) {
    REQUIRE(std::sqrt(400.0) * d.distance_to_boundary(r) >= 5.0);
    CHECK(std::abs(one_point(km, Complex(r, 0)) / 400.0 - 1.0) <= 0.05);
  }
}

TEST_CASE("finite-n berezin mass") {
  const auto pot = Potential::ginibre();
  const auto d = droplet_for(pot);
  const KernelModel km(pot, 100);
  const auto edge = rescale_frame(pot, d, 1.0, 100);
  for (Complex z : {Complex(0, 0), Complex(-1, 0.5), Complex(0.5, -1), Complex(1, 1), Complex(-3, 0)})
    CHECK(std::abs(berezin_mass(km, edge, z) - 1.0) <= 1e-4);
  CHECK_THROWS_AS(berezin(km, edge, 1e6, 0.0), DomainError);

  const auto ell = Potential::ellipse(0.5);
  const KernelModel ke(ell, 48);
  const auto f = rescale_frame(ell, droplet_for(ell), Complex(std::sqrt(3.0), 0), 48);
  for (Complex z : {Complex(0, 0), Complex(-1, 0.5)}) CHECK(std::abs(berezin_mass(ke, f, z) - 1.0) <= 1e-4);
}

TEST_CASE("property: kernel profile stabilizes as n doubles") {
  const auto pot = Potential::ginibre();
  const auto d = droplet_for(pot);
  const KernelModel k200(pot, 200), k400(pot, 400);
  const auto f200 = rescale_frame(pot, d, 1.0, 200), f400 = rescale_frame(pot, d, 1.0, 400);
  for (Complex z : random_points(6, 1.5, 41))
    for (Complex w : random_points(6, 1.5, 43))
      CHECK(std::abs(std::abs(rescaled_kernel(k200, f200, z, w)) - std::abs(rescaled_kernel(k400, f400, z, w))) <=
            0.05);
}

TEST_CASE("property: maximum principle for weighted polynomials") {
  const auto pot = Potential::ginibre();
  const auto b = WeightedBasis::build(pot, 40);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<Complex> phi;
  const Grid2D inside = polar_grid(1.0, 80, 256);
  const Grid2D outside = annular_grid(1.0, 2.5, 120, 256);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> c(40);
    for (auto& v : c) v = Complex(g(rng), g(rng));
    auto f = [&](Complex z) {
      b.eval(z, phi);
      Complex s = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * phi[k];
      return std::abs(s);
    };
    double in = 0.0, out = 0.0;
    for (Complex z : inside.nodes) in = std::max(in, f(z));
    for (std::size_t k = 0; k < 2048; ++k) in = std::max(in, f(std::polar(1.0, 2 * kPi * k / 2048)));
    for (Complex z : outside.nodes) out = std::max(out, f(z));
    CHECK(out <= in * (1.0 + 1e-6));
  }
}

TEST_CASE("property: sub-mean-value constant is stable in n") {
  // max over random f and centers of |f(z)|^2 / (n int_{D(z, 1/sqrt n)} |f|^2)
  auto measure = [](std::size_t n) {
    const auto b = WeightedBasis::build(Potential::ginibre(), n);
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    std::vector<Complex> phi, c(n);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      for (auto& v : c) v = Complex(g(rng), g(rng));
      auto f2 = [&](Complex z) {
        b.eval(z, phi);
        Complex s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += c[k] * phi[k];
        return std::norm(s);
      };
      for (Complex z : {Complex(0, 0), Complex(0.5, 0.2), Complex(-0.3, 0.8), Complex(0.98, 0)}) {
        const double rad = 1.0 / std::sqrt(double(n));
        const double local = integrate2d_real(polar_grid(rad, 24, 64, z), f2);
        worst = std::max(worst, f2(z) / (double(n) * local));
      }
    }
    return worst;
  };
  const double c50 = measure(50), c100 = measure(100);
  CHECK(std::isfinite(c50));
  CHECK(c100 == doctest::Approx(c50).epsilon(0.25));
}
