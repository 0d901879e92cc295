#pragma once

// External potentials Q and their derivatives.
//
// Conventions used everywhere in this library:
//   * laplacian() returns 1/4 of the standard Laplacian, so that
//     laplacian(|z|^2) == 1;
//   * areas are measured with dA = d^2z / pi, so the unit disk has measure 1;
//   * grad() returns the planar gradient (dQ/dx, dQ/dy) packed as x + iy;
//   * dz() returns the Wirtinger derivative dQ/dz = (Q_x - i Q_y) / 2.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coulomb/common.hpp"

namespace coulomb {

enum class PotentialKind { Ginibre, MittagLeffler, Ellipse, Custom };

/// Closed-form pieces of a user-supplied potential. Only `value` is
/// required; missing derivatives fall back to central finite differences
/// with step `fd_step`.
struct CustomPotential {
  std::string name = "custom";
  std::function<double(Complex)> value;
  std::function<Complex(Complex)> gradient;   // optional
  std::function<double(Complex)> laplacian;   // optional, 1/4 convention
  std::function<bool(Complex)> in_domain;     // optional, default: whole plane
  bool radial = false;
  double fd_step = 1e-5;
};

class Potential {
 public:
  static Potential ginibre();
  static Potential mittag_leffler(double p);
  static Potential ellipse(double t);
  static Potential custom(CustomPotential spec);

  PotentialKind kind() const noexcept { return kind_; }
  /// Mittag-Leffler exponent p (1 for Ginibre).
  double exponent() const noexcept { return p_; }
  /// Ellipse parameter t (0 for the radial built-ins).
  double ellipse_t() const noexcept { return t_; }
  bool radial() const noexcept;
  std::string name() const;

  bool in_domain(Complex z) const;
  double operator()(Complex z) const;
  Complex grad(Complex z) const;
  double laplacian(Complex z) const;
  Complex dz(Complex z) const { return 0.5 * std::conj(grad(z)); }

  /// Radial profile q(r) = Q(r) for radial potentials.
  double radial_value(double r) const { return (*this)(Complex(r, 0.0)); }
  /// r * dq/dr, the quantity whose half is the sigma-mass of D(0, r).
  double radial_flux(double r) const;

 private:
  Potential(PotentialKind kind, double p, double t) : kind_(kind), p_(p), t_(t) {}

  void require_domain(Complex z) const;

  PotentialKind kind_;
  double p_ = 1.0;
  double t_ = 0.0;
  std::shared_ptr<const CustomPotential> custom_;
};

// Free-function forms of the potential operations.
double eval_potential(const Potential& pot, Complex z);
Complex grad(const Potential& pot, Complex z);
double laplacian(const Potential& pot, Complex z);

struct GrowthReport {
  std::vector<double> radii;
  /// min over sample angles of Q(z) / log|z|^2 at each radius
  std::vector<double> min_ratio;
  double margin = 0.0;
  bool pass = false;
};

/// Empirical check of Q(z) / log|z|^2 > 1 at large |z|. The verdict uses the
/// largest radius; smaller radii are reported only.
GrowthReport growth_check(const Potential& pot, const std::vector<double>& radii,
                          double margin = 0.05, std::size_t angles = 256);

}  // namespace coulomb
