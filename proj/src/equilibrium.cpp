#include "coulomb/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "detail/angular.hpp"

namespace coulomb {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kMembershipSlack = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

// Roots of A r^2 + 2 B r + C = 0 (A > 0), ascending; nullopt if no real chord.
std::optional<std::pair<double, double>> chord(double A, double B, double C) {
  const double disc = B * B - A * C;
  if (!(disc > 0.0)) return std::nullopt;
  const double sq = std::sqrt(disc);
  // stable form
  const double qq = -(B + std::copysign(sq, B));
  double r0 = qq / A;
  double r1 = (qq != 0.0) ? C / qq : -r0;
  if (r0 > r1) std::swap(r0, r1);
  return std::make_pair(r0, r1);
}

std::optional<std::pair<double, double>> circle_chord(Complex s, double radius, Complex dir) {
  const double B = (s * std::conj(dir)).real();
  const double C = std::norm(s) - radius * radius;
  return chord(1.0, B, C);
}

void tangents_to_circle(Complex s, double radius, std::vector<double>& out) {
  // s = origin - center
  const double d = std::abs(s);
  if (radius <= 0.0 || d < radius * (1.0 - 1e-12)) return;
  const double half = std::asin(std::min(1.0, radius / d));
  const double base = std::arg(-s);
  out.push_back(wrap_angle(base - half));
  out.push_back(wrap_angle(base + half));
}

BoundaryPoint ellipse_nearest(const EllipseShape& e, Complex z) {
  const double a = e.a;
  const double b = e.b;
  const double x = z.real();
  const double y = z.imag();
  auto dist2 = [&](double t) { return std::norm(Complex(a * std::cos(t) - x, b * std::sin(t) - y)); };
  auto d1 = [&](double t) {
    return (b * b - a * a) * std::sin(t) * std::cos(t) + a * x * std::sin(t) - b * y * std::cos(t);
  };
  auto d2 = [&](double t) {
    return (b * b - a * a) * std::cos(2.0 * t) + a * x * std::cos(t) + b * y * std::sin(t);
  };
  constexpr int kSamples = 128;
  const double h = kTwoPi / kSamples;
  std::vector<double> vals(kSamples);
  for (int i = 0; i < kSamples; ++i) vals[i] = dist2(h * i);

  double best_t = 0.0;
  double best_d = kInf;
  for (int i = 0; i < kSamples; ++i) {
    const double prev = vals[(i + kSamples - 1) % kSamples];
    const double next = vals[(i + 1) % kSamples];
    if (vals[i] > prev || vals[i] > next) continue;
    double lo = h * i - h;
    double hi = h * i + h;
    double t = h * i;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const double g2 = d2(t);
      if (!(g2 > 0.0)) break;
      const double step = d1(t) / g2;
      const double nt = t - step;
      if (nt < lo || nt > hi) break;
      t = nt;
      if (std::abs(step) < 1e-15) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      // golden section on the bracket
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = hi - g * (hi - lo);
      double d = lo + g * (hi - lo);
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (dist2(c) < dist2(d)) {
          hi = d;
        } else {
          lo = c;
        }
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
      }
      t = 0.5 * (lo + hi);
    }
    t = wrap_angle(t);
    const double dt = dist2(t);
    const double tie = 1e-12 * std::max(1.0, dt);
    if (best_d == kInf || dt < best_d - tie || (std::abs(dt - best_d) <= tie && t < best_t)) {
      best_d = dt;
      best_t = t;
    }
  }
  BoundaryPoint bp;
  bp.parameter = best_t;
  bp.point = Complex(a * std::cos(best_t), b * std::sin(best_t));
  const Complex n(b * std::cos(best_t), a * std::sin(best_t));
  bp.normal = n / std::abs(n);
  return bp;
}

}  // namespace

// ---------------------------------------------------------------- Droplet

Droplet::Droplet(Shape shape) : shape_(std::move(shape)) {
  std::visit(overloaded{
                 [](const DiskShape& d) {
                   if (!(d.radius > 0.0)) throw std::invalid_argument("disk droplet: radius must be > 0");
                 },
                 [](const AnnulusShape& s) {
                   if (!(s.inner >= 0.0 && s.outer > s.inner)) {
                     throw std::invalid_argument("annulus droplet: need 0 <= inner < outer");
                   }
                 },
                 [](const EllipseShape& e) {
                   if (!(e.a > 0.0 && e.b > 0.0)) {
                     throw std::invalid_argument("ellipse droplet: semi-axes must be > 0");
                   }
                 },
             },
             shape_);
}

Droplet Droplet::disk(double radius, Complex center) { return Droplet(DiskShape{center, radius}); }
Droplet Droplet::annulus(double inner, double outer) { return Droplet(AnnulusShape{inner, outer}); }
Droplet Droplet::ellipse(double a, double b) { return Droplet(EllipseShape{a, b}); }

std::string Droplet::kind_name() const {
  return std::visit(overloaded{
                        [](const DiskShape&) { return std::string("disk"); },
                        [](const AnnulusShape&) { return std::string("annulus"); },
                        [](const EllipseShape&) { return std::string("ellipse"); },
                    },
                    shape_);
}

bool Droplet::contains(Complex z) const {
  return std::visit(overloaded{
                        [&](const DiskShape& d) {
                          return std::abs(z - d.center) <= d.radius * (1.0 + kMembershipSlack);
                        },
                        [&](const AnnulusShape& s) {
                          const double r = std::abs(z);
                          return r <= s.outer * (1.0 + kMembershipSlack) &&
                                 r >= s.inner * (1.0 - kMembershipSlack);
                        },
                        [&](const EllipseShape& e) {
                          const double u = z.real() / e.a;
                          const double v = z.imag() / e.b;
                          return u * u + v * v <= 1.0 + 2.0 * kMembershipSlack;
                        },
                    },
                    shape_);
}

double Droplet::signed_distance(Complex z) const {
  return std::visit(overloaded{
                        [&](const DiskShape& d) { return d.radius - std::abs(z - d.center); },
                        [&](const AnnulusShape& s) {
                          const double r = std::abs(z);
                          if (s.inner <= 0.0) return s.outer - r;
                          return std::min(s.outer - r, r - s.inner);
                        },
                        [&](const EllipseShape& e) {
                          const double dist = std::abs(z - ellipse_nearest(e, z).point);
                          const double u = z.real() / e.a;
                          const double v = z.imag() / e.b;
                          return (u * u + v * v <= 1.0) ? dist : -dist;
                        },
                    },
                    shape_);
}

double Droplet::distance_to_boundary(Complex z) const { return std::abs(signed_distance(z)); }

BoundaryPoint Droplet::nearest_boundary(Complex z) const {
  return std::visit(
      overloaded{
          [&](const DiskShape& d) {
            const Complex s = z - d.center;
            const double t = (s == Complex(0.0, 0.0)) ? 0.0 : wrap_angle(std::arg(s));
            const Complex u = std::polar(1.0, t);
            return BoundaryPoint{d.center + d.radius * u, u, t};
          },
          [&](const AnnulusShape& s) {
            const double r = std::abs(z);
            const double t = (r == 0.0) ? 0.0 : wrap_angle(std::arg(z));
            const Complex u = std::polar(1.0, t);
            if (s.inner > 0.0 && std::abs(r - s.inner) < std::abs(s.outer - r)) {
              return BoundaryPoint{s.inner * u, -u, kTwoPi + t};
            }
            return BoundaryPoint{s.outer * u, u, t};
          },
          [&](const EllipseShape& e) { return ellipse_nearest(e, z); },
      },
      shape_);
}

Complex Droplet::boundary_point(double parameter) const {
  return std::visit(overloaded{
                        [&](const DiskShape& d) { return d.center + std::polar(d.radius, parameter); },
                        [&](const AnnulusShape& s) {
                          if (parameter >= kTwoPi && s.inner > 0.0) {
                            return std::polar(s.inner, parameter - kTwoPi);
                          }
                          return std::polar(s.outer, parameter);
                        },
                        [&](const EllipseShape& e) {
                          return Complex(e.a * std::cos(parameter), e.b * std::sin(parameter));
                        },
                    },
                    shape_);
}

double Droplet::area() const {
  return std::visit(overloaded{
                        [](const DiskShape& d) { return d.radius * d.radius; },
                        [](const AnnulusShape& s) { return s.outer * s.outer - s.inner * s.inner; },
                        [](const EllipseShape& e) { return e.a * e.b; },
                    },
                    shape_);
}

double Droplet::outer_radius() const {
  return std::visit(overloaded{
                        [](const DiskShape& d) { return std::abs(d.center) + d.radius; },
                        [](const AnnulusShape& s) { return s.outer; },
                        [](const EllipseShape& e) { return std::max(e.a, e.b); },
                    },
                    shape_);
}

std::pair<double, double> Droplet::half_extent() const {
  return std::visit(overloaded{
                        [](const DiskShape& d) { return std::make_pair(d.radius, d.radius); },
                        [](const AnnulusShape& s) { return std::make_pair(s.outer, s.outer); },
                        [](const EllipseShape& e) { return std::make_pair(e.a, e.b); },
                    },
                    shape_);
}

Complex Droplet::center() const {
  if (const auto* d = std::get_if<DiskShape>(&shape_)) return d->center;
  return {0.0, 0.0};
}

double Droplet::level(Complex z) const {
  return std::visit(overloaded{
                        [&](const DiskShape& d) { return std::abs(z - d.center) / d.radius; },
                        [&](const AnnulusShape& s) {
                          return (std::abs(z) - s.inner) / (s.outer - s.inner);
                        },
                        [&](const EllipseShape& e) {
                          return std::hypot(z.real() / e.a, z.imag() / e.b);
                        },
                    },
                    shape_);
}

Complex Droplet::point_at_level(double lv, double angle) const {
  return std::visit(overloaded{
                        [&](const DiskShape& d) { return d.center + std::polar(lv * d.radius, angle); },
                        [&](const AnnulusShape& s) {
                          return std::polar(s.inner + lv * (s.outer - s.inner), angle);
                        },
                        [&](const EllipseShape& e) {
                          return Complex(lv * e.a * std::cos(angle), lv * e.b * std::sin(angle));
                        },
                    },
                    shape_);
}

int Droplet::ray_segments(Complex origin, Complex dir, RaySegments& out) const {
  int count = 0;
  auto push = [&](double r0, double r1) {
    r0 = std::max(r0, 0.0);
    if (r1 > r0) out[count++] = {r0, r1};
  };
  std::visit(overloaded{
                 [&](const DiskShape& d) {
                   if (auto c = circle_chord(origin - d.center, d.radius, dir)) push(c->first, c->second);
                 },
                 [&](const AnnulusShape& s) {
                   auto outer = circle_chord(origin, s.outer, dir);
                   if (!outer) return;
                   const double p0 = std::max(outer->first, 0.0);
                   const double p1 = outer->second;
                   auto inner = (s.inner > 0.0) ? circle_chord(origin, s.inner, dir) : std::nullopt;
                   if (!inner) {
                     push(p0, p1);
                     return;
                   }
                   if (inner->first > p0) push(p0, std::min(p1, inner->first));
                   if (inner->second < p1) push(std::max(p0, inner->second), p1);
                 },
                 [&](const EllipseShape& e) {
                   const Complex o(origin.real() / e.a, origin.imag() / e.b);
                   const Complex v(dir.real() / e.a, dir.imag() / e.b);
                   const double A = std::norm(v);
                   const double B = (o * std::conj(v)).real();
                   const double C = std::norm(o) - 1.0;
                   if (auto c = chord(A, B, C)) push(c->first, c->second);
                 },
             },
             shape_);
  return count;
}

std::vector<double> Droplet::tangent_angles(Complex origin) const {
  std::vector<double> out;
  std::visit(overloaded{
                 [&](const DiskShape& d) { tangents_to_circle(origin - d.center, d.radius, out); },
                 [&](const AnnulusShape& s) {
                   tangents_to_circle(origin, s.outer, out);
                   tangents_to_circle(origin, s.inner, out);
                 },
                 [&](const EllipseShape& e) {
                   std::vector<double> mapped;
                   const Complex o(origin.real() / e.a, origin.imag() / e.b);
                   tangents_to_circle(o, 1.0, mapped);
                   for (double t : mapped) {
                     out.push_back(wrap_angle(std::atan2(e.b * std::sin(t), e.a * std::cos(t))));
                   }
                 },
             },
             shape_);
  return out;
}

Grid2D Droplet::interior_grid(std::size_t nr, std::size_t ntheta) const {
  return std::visit(overloaded{
                        [&](const DiskShape& d) { return polar_grid(d.radius, nr, ntheta, d.center); },
                        [&](const AnnulusShape& s) { return annular_grid(s.inner, s.outer, nr, ntheta); },
                        [&](const EllipseShape& e) {
                          Grid2D g = polar_grid(1.0, nr, ntheta);
                          g.layout = GridLayout::Mapped;
                          for (std::size_t i = 0; i < g.size(); ++i) {
                            g.nodes[i] = Complex(e.a * g.nodes[i].real(), e.b * g.nodes[i].imag());
                            g.weights[i] *= e.a * e.b;
                          }
                          return g;
                        },
                    },
                    shape_);
}

// -------------------------------------------------------- droplet solving

Droplet solve_droplet_radial(const Potential& pot) {
  if (!pot.radial()) throw ConfigurationError("solve_droplet_radial: potential is not radial");
  auto flux = [&](double r) { return pot.radial_flux(r); };
  auto bisect = [&](auto&& f, double lo, double hi) {
    // f(lo) < 0 <= f(hi)
    for (int it = 0; it < 400 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto expand = [&](auto&& f, double start) {
    double hi = start;
    while (!(f(hi) >= 0.0)) {
      hi *= 2.0;
      if (hi > 1e8) {
        throw ConfigurationError("solve_droplet_radial: mass condition has no root in the bracket");
      }
    }
    return hi;
  };

  constexpr double kNear0 = 1e-3;
  double inner = 0.0;
  if (flux(kNear0) < 0.0) {
    const double hi = expand(flux, kNear0);
    inner = bisect(flux, kNear0, hi);
  }
  const double base = flux(inner);
  // mass of {inner < |z| < r} under Laplacian(Q) dA is (flux(r) - flux(inner)) / 2
  auto mass_excess = [&](double r) { return 0.5 * (flux(r) - base) - 1.0; };
  const double lo = std::max(inner, kNear0 * 1e-3);
  if (mass_excess(lo) >= 0.0) {
    throw ConfigurationError("solve_droplet_radial: mass condition has no root in the bracket");
  }
  const double hi = expand(mass_excess, std::max(1.0, 2.0 * lo));
  const double outer = bisect(mass_excess, lo, hi);
  if (inner > 0.0) return Droplet::annulus(inner, outer);
  return Droplet::disk(outer);
}

Droplet droplet_ellipse(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("droplet_ellipse: t must lie in (0, 1)");
  const double a = std::sqrt((1.0 + t) / (1.0 - t));
  return Droplet::ellipse(a, 1.0 / a);
}

Droplet droplet_for(const Potential& pot) {
  if (pot.kind() == PotentialKind::Ellipse) return droplet_ellipse(pot.ellipse_t());
  if (pot.radial()) return solve_droplet_radial(pot);
  throw ConfigurationError("no droplet construction for potential " + pot.name());
}

// ------------------------------------------------------ equilibrium measure

EquilibriumMeasure::EquilibriumMeasure(Droplet droplet, std::function<double(Complex)> density)
    : droplet_(std::move(droplet)), raw_density_(std::move(density)) {
  const Grid2D g = droplet_.interior_grid(64, 128);
  raw_mass_ = integrate2d_real(g, raw_density_);
  if (!(raw_mass_ > 0.0)) throw ConfigurationError("equilibrium measure: density has no mass on S");
}

EquilibriumMeasure::EquilibriumMeasure(const Potential& pot, Droplet droplet)
    : EquilibriumMeasure(std::move(droplet), [pot](Complex z) { return pot.laplacian(z); }) {}

EquilibriumMeasure EquilibriumMeasure::with_density(Droplet droplet,
                                                    std::function<double(Complex)> density) {
  return EquilibriumMeasure(std::move(droplet), std::move(density));
}

double EquilibriumMeasure::density(Complex z) const {
  return droplet_.contains(z) ? density_on_support(z) : 0.0;
}

// ------------------------------------------------------ logarithmic potential

namespace {

struct RayMoments {
  double log_moment = 0.0;  // int log(1/r) rho r dr
  double flat = 0.0;        // int rho dr
};

RayMoments ray_moments(const EquilibriumMeasure& mu, Complex z, Complex dir, const Quadrature1D& q) {
  RaySegments segs;
  const int count = mu.droplet().ray_segments(z, dir, segs);
  RayMoments m;
  for (int s = 0; s < count; ++s) {
    const auto [r0, r1] = segs[s];
    if (r0 == 0.0) {
      // r = r1 u^2 smooths the log r and 1/r behaviour at the evaluation point
      for (std::size_t i = 0; i < q.size(); ++i) {
        const double u = q.nodes[i];
        const double r = r1 * u * u;
        const double dr = 2.0 * r1 * u * q.weights[i];
        const double rho = mu.density_on_support(z + r * dir);
        m.log_moment += -std::log(r) * rho * r * dr;
        m.flat += rho * dr;
      }
    } else {
      const double len = r1 - r0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        const double r = r0 + len * q.nodes[i];
        const double dr = len * q.weights[i];
        const double rho = mu.density_on_support(z + r * dir);
        m.log_moment += -std::log(r) * rho * r * dr;
        m.flat += rho * dr;
      }
    }
  }
  return m;
}

}  // namespace

double log_potential(const EquilibriumMeasure& mu, Complex z, const LogQuadrature& quad) {
  const Quadrature1D q = gauss_legendre(quad.nr, 0.0, 1.0);
  const double total = detail::integrate_angle<double>(
      mu.droplet().tangent_angles(z), quad.ntheta,
      [&](double theta) { return ray_moments(mu, z, std::polar(1.0, theta), q).log_moment; });
  return total / kPi;
}

double log_potential(const PointMass& mu, Complex z) {
  const double d = std::abs(z - mu.at);
  if (d == 0.0) return kInf;
  return -mu.mass * std::log(d);
}

Complex log_potential_gradient(const EquilibriumMeasure& mu, Complex z, const LogQuadrature& quad) {
  const Quadrature1D q = gauss_legendre(quad.nr, 0.0, 1.0);
  const Complex total = detail::integrate_angle<Complex>(
      mu.droplet().tangent_angles(z), quad.ntheta, [&](double theta) {
        const Complex dir = std::polar(1.0, theta);
        return dir * ray_moments(mu, z, dir, q).flat;
      });
  return total / kPi;
}

// ------------------------------------------------------------ Robin / obstacle

RobinResult robin_constant(const Potential& pot, const EquilibriumMeasure& mu,
                           const LogQuadrature& quad, const RobinSampling& sampling) {
  if (sampling.per_axis < 2) throw std::invalid_argument("robin_constant: per_axis must be >= 2");
  const Droplet& S = mu.droplet();
  const auto [hx, hy] = S.half_extent();
  const Complex c = S.center();
  const std::size_t n = sampling.per_axis;
  std::vector<Complex> pts;
  pts.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      const double v = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1);
      pts.push_back(c + Complex(u * sampling.extent * hx, v * sampling.extent * hy));
    }
  }
  std::vector<double> vals(pts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t k = 0; k < pts.size(); ++k) {
    vals[k] = pot(pts[k]) + 2.0 * log_potential(mu, pts[k], quad);
  }
  RobinResult res;
  std::size_t arg = 0;
  for (std::size_t k = 1; k < vals.size(); ++k) {
    if (vals[k] < vals[arg]) arg = k;
  }
  res.gamma = vals[arg];
  res.argmin = pts[arg];
  res.covers_droplet = true;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!S.contains(pts[k])) continue;
    const double dev = vals[k] - res.gamma;
    res.spread_on_droplet = std::max(res.spread_on_droplet, dev);
    if (dev > sampling.tolerance) res.covers_droplet = false;
  }
  return res;
}

double obstacle(const Potential&, const EquilibriumMeasure& mu, double gamma, Complex z,
                const LogQuadrature& quad) {
  return -2.0 * log_potential(mu, z, quad) + gamma;
}

ObstacleReport obstacle_report(const Potential& pot, const EquilibriumMeasure& mu, double gamma,
                               const std::vector<Complex>& samples, const LogQuadrature& quad) {
  constexpr double kCircle = 0.1;
  constexpr std::size_t kCirclePoints = 32;
  ObstacleReport rep;
  rep.gamma = gamma;
  rep.samples = samples;
  rep.values.resize(samples.size());
  std::vector<double> harm(samples.size(), 0.0);
  const Droplet& S = mu.droplet();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Complex z = samples[k];
    rep.values[k] = obstacle(pot, mu, gamma, z, quad);
    if (!S.contains(z) && S.distance_to_boundary(z) > 1.5 * kCircle) {
      double avg = 0.0;
      for (std::size_t j = 0; j < kCirclePoints; ++j) {
        const Complex w = z + std::polar(kCircle, kTwoPi * static_cast<double>(j) / kCirclePoints);
        avg += obstacle(pot, mu, gamma, w, quad);
      }
      harm[k] = std::abs(rep.values[k] - avg / static_cast<double>(kCirclePoints));
    }
  }
  rep.max_excess = -kInf;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double diff = rep.values[k] - pot(samples[k]);
    rep.max_excess = std::max(rep.max_excess, diff);
    if (S.contains(samples[k])) {
      rep.max_deviation_on_droplet = std::max(rep.max_deviation_on_droplet, std::abs(diff));
    }
    rep.harmonicity_defect = std::max(rep.harmonicity_defect, harm[k]);
  }
  return rep;
}

// -------------------------------------------------------------- energies

double equilibrium_energy(const Potential& pot, const EquilibriumMeasure& mu, const LogQuadrature& quad) {
  const Grid2D g = mu.droplet().interior_grid(quad.outer_nr, quad.outer_ntheta);
  return integrate2d_real(g, [&](Complex z) {
    return mu.density_on_support(z) * (log_potential(mu, z, quad) + pot(z));
  });
}

double equilibrium_energy(const Potential&, const PointMass&) { return kInf; }

double equilibrium_residual(const Potential& pot, const EquilibriumMeasure& mu, const LogQuadrature& quad) {
  constexpr std::array<double, 6> kLevels{0.0, 0.2, 0.4, 0.6, 0.8, 0.9};
  constexpr std::size_t kAngles = 16;
  std::vector<Complex> pts;
  for (double lv : kLevels) {
    const std::size_t na = (lv == 0.0 && !std::holds_alternative<AnnulusShape>(mu.droplet().shape())) ? 1 : kAngles;
    for (std::size_t j = 0; j < na; ++j) {
      pts.push_back(mu.droplet().point_at_level(lv, kTwoPi * static_cast<double>(j) / kAngles));
    }
  }
  std::vector<double> res(pts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < pts.size(); ++k) {
    res[k] = std::abs(pot.grad(pts[k]) + 2.0 * log_potential_gradient(mu, pts[k], quad));
  }
  return *std::max_element(res.begin(), res.end());
}

}  // namespace coulomb
