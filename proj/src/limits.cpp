#include "coulomb/limits.hpp"

#include <cmath>

#include "coulomb/quadrature.hpp"
#include "coulomb/special.hpp"

namespace coulomb {

Complex ginibre_G(Complex z, Complex w) {
  return std::exp(z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w));
}

Complex kernel_Km(const PlasmaParams& pp, Complex z, Complex w) {
  if (pp.infinite()) return ginibre_G(z, w);
  const Complex lg = z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w);
  return std::exp(lg + log_plasma_F(z + std::conj(w) - 2.0 * pp.m));
}

double one_point_Km(const PlasmaParams& pp, Complex z) {
  if (pp.infinite()) return 1.0;
  return plasma_F(Complex(2.0 * (z.real() - pp.m), 0.0)).real();
}

double berezin_Bm(const PlasmaParams& pp, Complex z, Complex w) {
  const double diag = one_point_Km(pp, z);
  if (!(diag > 0.0)) throw DomainError("berezin_Bm: K(z, z) vanishes");
  if (pp.infinite()) return std::exp(-std::norm(z - w));
  const double lf = log_plasma_F(z + std::conj(w) - 2.0 * pp.m).real();
  return std::exp(-std::norm(z - w) + 2.0 * lf - std::log(diag));
}

Complex phi_by_quadrature(Complex z, double m) {
  // substitute s = z - t: Phi = int_{z - m}^{inf} gamma(s) ds along the shifted line
  const double lo = m - 40.0 - std::abs(z.real());
  const Quadrature1D q = composite_gauss_legendre(64, 20, lo, m);
  Complex s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Complex d = z - q.nodes[i];
    s += q.weights[i] * std::exp(-0.5 * d * d);
  }
  return s / std::sqrt(2.0 * kPi);
}

double mass_one_mu(const PlasmaParams& pp, Complex z, double Lambda, const DiskQuadrature& q) {
  if (!(Lambda > 0.0)) throw std::invalid_argument("mass_one_mu: Lambda must be > 0");
  const Grid2D g = polar_grid(Lambda, q.nr, q.ntheta, z);
  return integrate2d_real(g, [&](Complex w) { return berezin_Bm(pp, z, w); });
}

double ginibre_mass(Complex z, const DiskQuadrature& q) {
  const Grid2D g = polar_grid(9.0, q.nr, q.ntheta, z);
  return integrate2d_real(g, [&](Complex w) { return std::norm(ginibre_G(z, w)); });
}

double berezin_mass(const PlasmaParams& pp, Complex z, const PlaneQuadrature& q) {
  if (pp.infinite()) return ginibre_mass(z);
  const double x0 = std::min(z.real(), pp.m) - q.x_margin;
  const double x1 = std::max(z.real(), pp.m) + q.x_margin;
  const Quadrature1D qx = composite_gauss_legendre(q.x_panels, q.order, x0, x1);
  const double half = 0.5 * kPi;
  const Quadrature1D qu = composite_gauss_legendre(q.y_panels, q.order, -half, half);
  Grid2D g;
  g.layout = GridLayout::Mapped;
  g.center = z;
  for (std::size_t j = 0; j < qu.size(); ++j) {
    const double u = qu.nodes[j];
    const double c = std::cos(u);
    const double y = z.imag() + q.y_scale * std::tan(u);
    const double dy = q.y_scale * qu.weights[j] / (c * c);
    for (std::size_t i = 0; i < qx.size(); ++i) {
      g.nodes.emplace_back(qx.nodes[i], y);
      g.weights.push_back(qx.weights[i] * dy / kPi);
    }
  }
  return integrate2d_real(g, [&](Complex w) { return berezin_Bm(pp, z, w); });
}

Complex cauchy_transform(const PlasmaParams& pp, Complex z, const WardGrid& g) {
  const Quadrature1D qr = composite_gauss_legendre(g.panels, g.order, 0.0, g.radius);
  // 1/(z - w) dA(w) = -exp(-i theta) dr dtheta / pi for w = z + r exp(i theta)
  std::vector<Complex> rows(g.ntheta);
  for (std::size_t j = 0; j < g.ntheta; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(g.ntheta);
    const Complex dir = std::polar(1.0, theta);
    std::vector<double> terms(qr.size());
    for (std::size_t i = 0; i < qr.size(); ++i) terms[i] = qr.weights[i] * berezin_Bm(pp, z, z + qr.nodes[i] * dir);
    rows[j] = -std::conj(dir) * pairwise_sum(terms);
  }
  return pairwise_sum(rows) * (2.0 / static_cast<double>(g.ntheta));
}

std::vector<Complex> disk_lattice(double radius, double h) {
  std::vector<Complex> out;
  const int k = static_cast<int>(std::floor(radius / h + 1e-9));
  for (int j = -k; j <= k; ++j) {
    for (int i = -k; i <= k; ++i) {
      const Complex z(i * h, j * h);
      if (std::abs(z) <= radius + 1e-12) out.push_back(z);
    }
  }
  return out;
}

namespace {

double max_ward(const PlasmaParams& pp, const std::vector<Complex>& zs, const WardGrid& g,
                std::vector<WardPoint>* out) {
  const double h = g.fd_step;
  std::vector<WardPoint> pts(zs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const Complex z = zs[k];
    const Complex cx = (cauchy_transform(pp, z + h, g) - cauchy_transform(pp, z - h, g)) / (2.0 * h);
    const Complex cy = (cauchy_transform(pp, z + Complex(0, h), g) - cauchy_transform(pp, z - Complex(0, h), g)) / (2.0 * h);
    WardPoint& p = pts[k];
    p.z = z;
    p.dbar_C = 0.5 * (cx + Complex(0, 1) * cy);
    auto logR = [&](Complex w) { return std::log(one_point_Km(pp, w)); };
    const double lap = (logR(z + h) + logR(z - h) + logR(z + Complex(0, h)) + logR(z - Complex(0, h)) - 4.0 * logR(z)) /
                       (4.0 * h * h);
    p.rhs = one_point_Km(pp, z) - 1.0 - lap;
    p.residual = std::abs(p.dbar_C - p.rhs);
  }
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, p.residual);
  if (out) *out = std::move(pts);
  return m;
}

}  // namespace

WardReport ward_residual(const PlasmaParams& pp, const std::vector<Complex>& zs, const WardGrid& g,
                         bool check_doubling) {
  WardReport rep;
  rep.max_residual = max_ward(pp, zs, g, &rep.points);
  if (check_doubling) {
    rep.doubled_max_residual = max_ward(pp, zs, g.doubled(), nullptr);
    rep.converged = std::abs(rep.doubled_max_residual - rep.max_residual) <= rep.tolerance;
  } else {
    rep.doubled_max_residual = rep.max_residual;
  }
  return rep;
}

}  // namespace coulomb
