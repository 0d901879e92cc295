#pragma once

// Equilibrium measure, droplet geometry, logarithmic potential, Robin
// constant and obstacle function for the built-in potentials.

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coulomb/common.hpp"
#include "coulomb/potentials.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb {

struct DiskShape {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

/// Centered annulus inner <= |z| <= outer.
struct AnnulusShape {
  double inner = 0.0;
  double outer = 1.0;
};

/// Axis-aligned centered ellipse (x/a)^2 + (y/b)^2 <= 1.
struct EllipseShape {
  double a = 1.0;
  double b = 1.0;
};

struct BoundaryPoint {
  Complex point;
  /// Outer unit normal of S at `point`.
  Complex normal;
  /// Boundary parameter (angle for disks and ellipses; outer circle uses
  /// [0, 2 pi), inner circle of an annulus uses [2 pi, 4 pi)).
  double parameter = 0.0;
};

using RaySegments = std::array<std::pair<double, double>, 2>;

class Droplet {
 public:
  using Shape = std::variant<DiskShape, AnnulusShape, EllipseShape>;

  explicit Droplet(Shape shape);
  static Droplet disk(double radius, Complex center = {0.0, 0.0});
  static Droplet annulus(double inner, double outer);
  static Droplet ellipse(double a, double b);

  const Shape& shape() const noexcept { return shape_; }
  std::string kind_name() const;

  bool contains(Complex z) const;
  /// delta(z) = dist(z, boundary of S), zero exactly on the boundary.
  double distance_to_boundary(Complex z) const;
  /// Positive inside S, negative outside.
  double signed_distance(Complex z) const;
  /// Closest boundary point; ties go to the smaller parameter.
  BoundaryPoint nearest_boundary(Complex z) const;
  Complex boundary_point(double parameter) const;

  /// Area of S under dA.
  double area() const;
  /// max |z| over S.
  double outer_radius() const;
  /// Half-widths of the axis-aligned bounding box about the shape center.
  std::pair<double, double> half_extent() const;
  Complex center() const;

  /// Level coordinate: 0 at the center (inner circle for annuli), 1 on the
  /// outer boundary. Used for radial / elliptical binning.
  double level(Complex z) const;
  Complex point_at_level(double level, double angle) const;

  /// Intersections of the ray origin + r * dir (r >= 0, |dir| = 1) with S;
  /// returns the number of segments written to `out`.
  int ray_segments(Complex origin, Complex dir, RaySegments& out) const;
  /// Angles of rays from `origin` that graze the boundary.
  std::vector<double> tangent_angles(Complex origin) const;

  /// Quadrature grid covering exactly S (weights for dA).
  Grid2D interior_grid(std::size_t nr, std::size_t ntheta) const;

 private:
  Shape shape_;
};

/// Droplet of a radially symmetric potential (disk, or annulus when
/// r * dQ/dr < 0 near the origin), found by bisection on the mass condition.
Droplet solve_droplet_radial(const Potential& pot);
/// Droplet of Q_t = |z|^2 - t Re(z^2): ab = 1 and a / b = (1 + t) / (1 - t).
Droplet droplet_ellipse(double t);
/// Dispatch to the right construction for a built-in potential.
Droplet droplet_for(const Potential& pot);

/// A probability measure supported on a droplet with a given density
/// (with respect to dA). The equilibrium measure uses density Laplacian(Q);
/// the raw density is rescaled to unit mass, and raw_mass() records the
/// mass before rescaling.
class EquilibriumMeasure {
 public:
  EquilibriumMeasure(const Potential& pot, Droplet droplet);
  static EquilibriumMeasure with_density(Droplet droplet, std::function<double(Complex)> density);

  const Droplet& droplet() const noexcept { return droplet_; }
  /// Normalized density; zero outside S.
  double density(Complex z) const;
  /// Normalized density without the membership test, for nodes known to
  /// lie in S.
  double density_on_support(Complex z) const { return raw_density_(z) / raw_mass_; }
  double raw_mass() const noexcept { return raw_mass_; }

 private:
  EquilibriumMeasure(Droplet droplet, std::function<double(Complex)> density);

  Droplet droplet_;
  std::function<double(Complex)> raw_density_;
  double raw_mass_ = 1.0;
};

struct PointMass {
  Complex at{0.0, 0.0};
  double mass = 1.0;
};

/// Resolution of the ray quadrature used for potentials and energies.
struct LogQuadrature {
  std::size_t nr = 48;        ///< Gauss-Legendre nodes per radial segment
  std::size_t ntheta = 256;   ///< angular nodes around the evaluation point
  std::size_t outer_nr = 24;  ///< droplet grid for the outer energy integral
  std::size_t outer_ntheta = 64;
};

/// U^mu(z) = int log(1/|z - w|) dmu(w). Integrated on rays from z, which
/// absorbs the logarithmic singularity into the polar area element.
double log_potential(const EquilibriumMeasure& mu, Complex z, const LogQuadrature& quad = {});
double log_potential(const PointMass& mu, Complex z);
/// grad U^mu (planar gradient packed as x + iy).
Complex log_potential_gradient(const EquilibriumMeasure& mu, Complex z,
                               const LogQuadrature& quad = {});

struct RobinSampling {
  std::size_t per_axis = 41;
  double extent = 1.5;  ///< bounding box scale relative to the droplet
  double tolerance = 1e-6;
};

struct RobinResult {
  double gamma = 0.0;
  Complex argmin{0.0, 0.0};
  /// max over sampled points of S of (Q + 2U) - gamma
  double spread_on_droplet = 0.0;
  /// true when the minimizing set contains every sampled point of S
  bool covers_droplet = false;
};

RobinResult robin_constant(const Potential& pot, const EquilibriumMeasure& mu,
                           const LogQuadrature& quad = {}, const RobinSampling& sampling = {});

/// Obstacle function -2 U^sigma(z) + gamma.
double obstacle(const Potential& pot, const EquilibriumMeasure& mu, double gamma, Complex z,
                const LogQuadrature& quad = {});

struct ObstacleReport {
  double gamma = 0.0;
  std::vector<Complex> samples;
  std::vector<double> values;
  /// max |Qhat - Q| over samples in S
  double max_deviation_on_droplet = 0.0;
  /// max (Qhat - Q) over all samples; nonpositive up to quadrature error
  double max_excess = 0.0;
  /// max |Qhat(z) - circle average| at samples well outside S
  double harmonicity_defect = 0.0;
};

ObstacleReport obstacle_report(const Potential& pot, const EquilibriumMeasure& mu, double gamma,
                               const std::vector<Complex>& samples, const LogQuadrature& quad = {});

/// I_Q[mu] = double integral of log(1/|z-w|) + int Q dmu.
double equilibrium_energy(const Potential& pot, const EquilibriumMeasure& mu,
                          const LogQuadrature& quad = {});
/// Self-energy of an atom diverges.
double equilibrium_energy(const Potential& pot, const PointMass& mu);

/// max over interior samples of |grad(Q + 2 U^mu)|.
double equilibrium_residual(const Potential& pot, const EquilibriumMeasure& mu,
                            const LogQuadrature& quad = {});

}  // namespace coulomb
