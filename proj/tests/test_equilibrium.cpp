#include <doctest.h>

#include <cmath>
#include <random>

#include "coulomb/equilibrium.hpp"

using coulomb::Complex;
using coulomb::Droplet;
using coulomb::EquilibriumMeasure;
using coulomb::Potential;

namespace {

// Composite Simpson on [a, b] as an oracle independent of the library's rules.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

double disk_radius(const Droplet& d) { return std::get<coulomb::DiskShape>(d.shape()).radius; }

}  // namespace

TEST_CASE("radial droplets from the mass condition") {
  CHECK(disk_radius(coulomb::solve_droplet_radial(Potential::ginibre())) == doctest::Approx(1.0).epsilon(1e-10));

  const double p = 2.0;
  const double R = disk_radius(coulomb::solve_droplet_radial(Potential::mittag_leffler(p)));
  CHECK(R == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-10));
  // mass oracle: int_0^R p^2 r^(2p-2) 2r dr
  const double mass = simpson([&](double r) { return p * p * std::pow(r, 2 * p - 2) * 2 * r; }, 0.0, R);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(disk_radius(coulomb::solve_droplet_radial(Potential::mittag_leffler(1.0))) ==
        disk_radius(coulomb::solve_droplet_radial(Potential::ginibre())));
  CHECK_THROWS_AS(coulomb::solve_droplet_radial(Potential::ellipse(0.3)), coulomb::ConfigurationError);
}

TEST_CASE("annulus branch for a potential decreasing near the origin") {
  // Q = |z|^4 - |z|^2: r q'(r) = 4 r^4 - 2 r^2 < 0 near 0, zero at r0^2 = 1/2;
  // mass (flux(r1) - 0)/2 = 1 gives 2 r1^4 - r1^2 - 1 = 0, r1 = 1.
  coulomb::CustomPotential spec;
  spec.name = "ring";
  spec.value = [](Complex z) { return std::norm(z) * std::norm(z) - std::norm(z); };
  spec.gradient = [](Complex z) { return (4.0 * std::norm(z) - 2.0) * z; };
  spec.laplacian = [](Complex z) { return 4.0 * std::norm(z) - 1.0; };
  spec.radial = true;
  const Droplet d = coulomb::solve_droplet_radial(Potential::custom(spec));
  const auto& a = std::get<coulomb::AnnulusShape>(d.shape());
  CHECK(a.inner == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(a.outer == doctest::Approx(1.0).epsilon(1e-10));
  EquilibriumMeasure mu(Potential::custom(spec), d);
  CHECK(mu.raw_mass() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unsolvable mass condition") {
  coulomb::CustomPotential flat;
  flat.name = "log-growth";
  flat.value = [](Complex z) { return 0.5 * std::log1p(std::norm(z)); };
  flat.gradient = [](Complex z) { return z / (1.0 + std::norm(z)); };
  flat.radial = true;
  CHECK_THROWS_AS(coulomb::solve_droplet_radial(Potential::custom(flat)), coulomb::ConfigurationError);
}

TEST_CASE("ellipse droplet") {
  const Droplet d = coulomb::droplet_ellipse(0.5);
  const auto& e = std::get<coulomb::EllipseShape>(d.shape());
  CHECK(e.a == doctest::Approx(std::sqrt(3.0)));
  CHECK(e.b == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(d.area() == doctest::Approx(1.0));
  const auto& tiny = std::get<coulomb::EllipseShape>(coulomb::droplet_ellipse(1e-9).shape());
  CHECK(tiny.a == doctest::Approx(1.0));
  CHECK_THROWS_AS(coulomb::droplet_ellipse(1.0), std::invalid_argument);
  CHECK_THROWS_AS(coulomb::droplet_ellipse(-0.1), std::invalid_argument);
}

TEST_CASE("property: unit mass for every built-in") {
  for (const Potential& q : {Potential::ginibre(), Potential::mittag_leffler(2), Potential::mittag_leffler(3.5),
                             Potential::ellipse(0.2), Potential::ellipse(0.7)}) {
    EquilibriumMeasure mu(q, coulomb::droplet_for(q));
    CHECK(std::abs(mu.raw_mass() - 1.0) <= 1e-6);
  }
}

TEST_CASE("property: boundary distance vanishes exactly on the boundary") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2 * coulomb::kPi);
  for (const Droplet& d : {Droplet::disk(1.0), Droplet::disk(0.5, Complex(0.2, 0.1)), Droplet::annulus(0.4, 1.2),
                           coulomb::droplet_ellipse(0.5)}) {
    for (int k = 0; k < 40; ++k) {
      const double t = ang(rng);
      const Complex b = d.boundary_point(t);
      CHECK(d.distance_to_boundary(b) < 1e-12);
      const Complex inside = d.point_at_level(0.5, t);
      CHECK(d.distance_to_boundary(inside) > 0.0);
      CHECK(d.contains(inside));
      const Complex outside = d.point_at_level(1.3, t);
      CHECK_FALSE(d.contains(outside));
      CHECK(d.signed_distance(outside) < 0.0);
    }
  }
}

TEST_CASE("ellipse nearest boundary point against a dense scan") {
  const Droplet d = coulomb::droplet_ellipse(0.5);
  const auto& e = std::get<coulomb::EllipseShape>(d.shape());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int k = 0; k < 30; ++k) {
    const Complex z(u(rng), u(rng));
    double best = 1e300;
    for (int j = 0; j < 200000; ++j) {
      const double t = 2 * coulomb::kPi * j / 200000.0;
      best = std::min(best, std::abs(z - Complex(e.a * std::cos(t), e.b * std::sin(t))));
    }
    const auto bp = d.nearest_boundary(z);
    CHECK(std::abs(z - bp.point) == doctest::Approx(best).epsilon(1e-8));
    CHECK(std::abs(bp.normal) == doctest::Approx(1.0));
    // the normal is parallel to z - point when z is off the boundary
    const Complex dz = z - bp.point;
    CHECK(std::abs((dz * std::conj(bp.normal)).imag()) < 1e-7);
  }
  // both ends of the minor axis are equidistant from the center: smaller parameter wins
  CHECK(d.nearest_boundary(0.0).parameter == doctest::Approx(coulomb::kPi / 2));
  CHECK(std::abs(d.nearest_boundary(Complex(3, 0)).normal - Complex(1, 0)) < 1e-12);
}

TEST_CASE("disk and annulus normals point out of S") {
  CHECK(std::abs(Droplet::disk(1.0).nearest_boundary(Complex(0, 0.5)).normal - Complex(0, 1)) < 1e-14);
  const Droplet ring = Droplet::annulus(0.5, 1.0);
  const auto bp = ring.nearest_boundary(Complex(0.6, 0));
  CHECK(std::abs(bp.normal - Complex(-1, 0)) < 1e-14);
  CHECK(bp.parameter == doctest::Approx(2 * coulomb::kPi));
}

TEST_CASE("logarithmic potential of the ginibre measure") {
  const Potential g = Potential::ginibre();
  EquilibriumMeasure mu(g, Droplet::disk(1.0));
  const double at0 = simpson([](double r) { return r > 0 ? 2 * r * std::log(1 / r) : 0.0; }, 0.0, 1.0);
  CHECK(coulomb::log_potential(mu, 0.0) == doctest::Approx(at0).epsilon(1e-9));
  CHECK(coulomb::log_potential(mu, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(coulomb::log_potential(mu, Complex(0, 2)) == doctest::Approx(std::log(0.5)).epsilon(1e-9));
  // boundary and near-boundary points: (1 - r^2)/2 inside, log(1/r) outside
  for (double r : {0.3, 0.9, 0.999, 1.0, 1.001, 1.2}) {
    const double expect = r <= 1 ? (1 - r * r) / 2 : std::log(1 / r);
    CHECK(coulomb::log_potential(mu, std::polar(r, 0.7)) == doctest::Approx(expect).epsilon(1e-7));
  }
  CHECK(coulomb::log_potential(coulomb::PointMass{}, std::exp(1.0)) == doctest::Approx(-1.0));
  CHECK(coulomb::log_potential(coulomb::PointMass{}, 0.0) == coulomb::kInf);
}

TEST_CASE("property: potential is superharmonic on the support") {
  EquilibriumMeasure mu(Potential::mittag_leffler(2), coulomb::droplet_for(Potential::mittag_leffler(2)));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 8; ++k) {
    const Complex z(u(rng), u(rng));
    double avg = 0;
    for (int j = 0; j < 16; ++j) avg += coulomb::log_potential(mu, z + std::polar(0.1, 2 * coulomb::kPi * j / 16));
    CHECK(avg / 16 <= coulomb::log_potential(mu, z) + 1e-10);
  }
}

TEST_CASE("robin constant") {
  const Potential g = Potential::ginibre();
  EquilibriumMeasure mu(g, Droplet::disk(1.0));
  auto rob = coulomb::robin_constant(g, mu);
  CHECK(rob.gamma == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(rob.covers_droplet);
  double vals[3];
  int i = 0;
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.0, -0.8)}) {
    vals[i++] = g(z) + 2 * coulomb::log_potential(mu, z);
  }
  CHECK(std::abs(vals[0] - vals[1]) < 1e-4);
  CHECK(std::abs(vals[0] - vals[2]) < 1e-4);
  const double out = g(Complex(2, 0)) + 2 * coulomb::log_potential(mu, Complex(2, 0));
  CHECK(out == doctest::Approx(4 + 2 * std::log(0.5)).epsilon(1e-8));
  CHECK(out > rob.gamma);
}

TEST_CASE("obstacle function") {
  const Potential g = Potential::ginibre();
  EquilibriumMeasure mu(g, Droplet::disk(1.0));
  const double gamma = 1.0;
  for (Complex z : {Complex(0, 0), Complex(0.4, -0.3), Complex(0.99, 0)}) {
    CHECK(coulomb::obstacle(g, mu, gamma, z) == doctest::Approx(std::norm(z)).epsilon(1e-7));
  }
  CHECK(coulomb::obstacle(g, mu, gamma, Complex(0, 2)) == doctest::Approx(2 * std::log(2.0) + 1).epsilon(1e-8));
  const Complex z = std::polar(1.5, 0.3);
  double avg = 0;
  for (int j = 0; j < 64; ++j) avg += coulomb::obstacle(g, mu, gamma, z + std::polar(0.1, 2 * coulomb::kPi * j / 64));
  CHECK(std::abs(avg / 64 - coulomb::obstacle(g, mu, gamma, z)) < 1e-4);

  std::vector<Complex> samples;
  for (double r : {0.0, 0.5, 0.9, 1.3, 1.8}) samples.push_back(std::polar(r, 1.1));
  auto rep = coulomb::obstacle_report(g, mu, gamma, samples);
  CHECK(rep.max_deviation_on_droplet < 1e-7);
  CHECK(rep.max_excess < 1e-7);
  CHECK(rep.harmonicity_defect < 1e-4);
}

TEST_CASE("property: obstacle has a continuous gradient across the boundary") {
  const Potential q = Potential::ellipse(0.5);
  EquilibriumMeasure mu(q, coulomb::droplet_for(q));
  const auto& S = mu.droplet();
  const double h = 1e-3;
  for (int k = 0; k < 20; ++k) {
    const auto bp = S.nearest_boundary(S.boundary_point(2 * coulomb::kPi * (k + 0.5) / 20));
    auto qhat = [&](Complex w) { return coulomb::obstacle(q, mu, 0.0, w); };
    const Complex b = bp.point;
    const Complex n = bp.normal;
    const double inner = (qhat(b) - qhat(b - h * n)) / h;
    const double outer = (qhat(b + h * n) - qhat(b)) / h;
    CHECK(std::abs(inner - outer) < 1e-2);
  }
}

TEST_CASE("equilibrium energy") {
  const Potential g = Potential::ginibre();
  EquilibriumMeasure mu(g, Droplet::disk(1.0));
  const double e = coulomb::equilibrium_energy(g, mu);
  CHECK(e == doctest::Approx(0.75).epsilon(1e-7));
  // perturbed probability densities on the same disk
  for (double c : {-0.6, -0.3, 0.2, 0.5, 0.9}) {
    auto nu = EquilibriumMeasure::with_density(Droplet::disk(1.0), [c](Complex z) { return 1.0 + c * (std::norm(z) - 0.5); });
    CHECK(coulomb::equilibrium_energy(g, nu) >= e - 1e-9);
  }
  auto wide = EquilibriumMeasure::with_density(Droplet::disk(1.3), [](Complex) { return 1.0; });
  CHECK(coulomb::equilibrium_energy(g, wide) > e);
  CHECK(coulomb::equilibrium_energy(g, coulomb::PointMass{}) == coulomb::kInf);
}

TEST_CASE("equilibrium residual certifies droplets") {
  const Potential g = Potential::ginibre();
  CHECK(coulomb::equilibrium_residual(g, EquilibriumMeasure(g, Droplet::disk(1.0))) <= 1e-3);
  CHECK(coulomb::equilibrium_residual(g, EquilibriumMeasure(g, Droplet::disk(1.1))) >= 0.1);
  const Potential e = Potential::ellipse(0.5);
  CHECK(coulomb::equilibrium_residual(e, EquilibriumMeasure(e, coulomb::droplet_ellipse(0.5))) <= 1e-3);
  CHECK(coulomb::equilibrium_residual(e, EquilibriumMeasure(e, Droplet::disk(1.0))) >= 0.1);
  const Potential ml = Potential::mittag_leffler(3);
  CHECK(coulomb::equilibrium_residual(ml, EquilibriumMeasure(ml, coulomb::droplet_for(ml))) <= 1e-3);
}
