#pragma once

// Translation-invariant limiting kernels K^m(z, w) = G(z, w) F(z + conj(w) - 2m),
// their Berezin kernels, mass-one profiles and the Ward equation residual.

#include <vector>

#include "coulomb/common.hpp"

namespace coulomb {

struct PlasmaParams {
  /// offset of the half-plane; +inf gives the Ginibre kernel
  double m = 0.0;

  static PlasmaParams ginibre() { return {kInf}; }
  bool infinite() const noexcept { return m == kInf; }
};

/// G(z, w) = exp(z conj(w) - |z|^2/2 - |w|^2/2)
Complex ginibre_G(Complex z, Complex w);

Complex kernel_Km(const PlasmaParams& pp, Complex z, Complex w);
/// K^m(z, z) = F(2 Re z - 2m), real and positive.
double one_point_Km(const PlasmaParams& pp, Complex z);
/// |K^m(z, w)|^2 / K^m(z, z). Throws DomainError when K^m(z, z) underflows.
double berezin_Bm(const PlasmaParams& pp, Complex z, Complex w);

/// Phi_m(z) = int_{-inf}^m gamma(z - t) dt by direct quadrature (gamma the
/// standard normal density continued to complex z).
Complex phi_by_quadrature(Complex z, double m);

struct DiskQuadrature {
  std::size_t nr = 96;
  std::size_t ntheta = 128;
};

/// mu(Lambda) = int over D(z, Lambda) of B^m(z, .) dA.
double mass_one_mu(const PlasmaParams& pp, Complex z, double Lambda, const DiskQuadrature& q = {});

/// int |G(z, w)|^2 dA(w) on a polar grid centered at z truncated at radius 9.
double ginibre_mass(Complex z, const DiskQuadrature& q = {});

struct PlaneQuadrature {
  std::size_t x_panels = 16;
  std::size_t y_panels = 24;
  std::size_t order = 16;
  /// x range: m and Re z widened by this much
  double x_margin = 8.0;
  /// y = Im z + y_scale * tan(u)
  double y_scale = 2.0;
};

/// Full-plane mass of B^m(z, .). The w-plane tail decays like
/// exp(-2 (Re w - m)^2) / |w|^2, so y is integrated after a tangent map.
double berezin_mass(const PlasmaParams& pp, Complex z, const PlaneQuadrature& q = {});

struct WardGrid {
  double radius = 8.0;     ///< truncation radius of the w-plane polar grid
  std::size_t panels = 16; ///< radial Gauss-Legendre panels
  std::size_t order = 8;   ///< nodes per panel
  std::size_t ntheta = 128;
  double fd_step = 1e-3;

  WardGrid doubled() const {
    WardGrid g = *this;
    g.panels *= 2;
    g.ntheta *= 2;
    return g;
  }
};

/// C(z) = int B^m(z, w) / (z - w) dA(w) on the polar grid centered at z.
Complex cauchy_transform(const PlasmaParams& pp, Complex z, const WardGrid& g = {});

struct WardPoint {
  Complex z;
  Complex dbar_C;
  double rhs = 0.0;  ///< R - 1 - Laplacian log R
  double residual = 0.0;
};

struct WardReport {
  std::vector<WardPoint> points;
  double max_residual = 0.0;
  /// same quantity with both resolutions doubled
  double doubled_max_residual = 0.0;
  /// false when doubling moved the maximum residual by more than `tolerance`
  bool converged = true;
  double tolerance = 1e-3;
};

/// Lattice of spacing `h` inside |z| <= radius.
std::vector<Complex> disk_lattice(double radius, double h);

/// |dbar C - (R - 1 - Laplacian log R)| at each z; derivatives by central
/// differences with step g.fd_step.
WardReport ward_residual(const PlasmaParams& pp, const std::vector<Complex>& zs, const WardGrid& g = {},
                         bool check_doubling = true);

}  // namespace coulomb
