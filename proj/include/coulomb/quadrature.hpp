#pragma once

// Quadrature rules on intervals and in the plane. Planar weights are always
// normalized for dA = d^2z / pi.

#include <functional>
#include <span>
#include <vector>

#include "coulomb/common.hpp"

namespace coulomb {

struct Quadrature1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = -1.0;
  double b = 1.0;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on (a, b); exact through degree 2n - 1.
Quadrature1D gauss_legendre(std::size_t n, double a, double b);

/// Composite Gauss-Legendre: `panels` equal panels of `order` points each.
Quadrature1D composite_gauss_legendre(std::size_t panels, std::size_t order, double a, double b);

enum class GridLayout { Polar, Cartesian, Mapped };

struct Grid2D {
  std::vector<Complex> nodes;
  std::vector<double> weights;
  GridLayout layout = GridLayout::Polar;
  Complex center{0.0, 0.0};

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Tensor grid on the disk D(center, rmax): Gauss-Legendre in r, equispaced
/// angles theta_j = 2 pi j / ntheta. Weights carry 2 r dr dtheta / (2 pi).
Grid2D polar_grid(double rmax, std::size_t nr, std::size_t ntheta, Complex center = {0.0, 0.0});

/// Same layout restricted to the annulus rmin <= |z - center| <= rmax.
Grid2D annular_grid(double rmin, double rmax, std::size_t nr, std::size_t ntheta,
                    Complex center = {0.0, 0.0});

/// Gauss-Legendre tensor grid on [x0, x1] x [y0, y1]; weights dx dy / pi.
Grid2D cartesian_grid(double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny);

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);
Complex pairwise_sum(std::span<const Complex> values);

/// sum_i w_i f(z_i). Samples are evaluated in parallel and reduced with
/// pairwise summation in node order, so the result does not depend on the
/// thread count. A non-finite sample raises IntegrationError.
Complex integrate2d(const Grid2D& grid, const std::function<Complex(Complex)>& f);
double integrate2d_real(const Grid2D& grid, const std::function<double(Complex)>& f);

/// Weighted sum of precomputed samples (same ordering as grid.nodes).
Complex integrate_samples(const Grid2D& grid, std::span<const Complex> samples);
double integrate_samples(const Grid2D& grid, std::span<const double> samples);

}  // namespace coulomb
