#include "coulomb/density.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "detail/rng.hpp"

namespace coulomb {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double local_scale(const Potential& pot, Complex p, std::size_t n) {
  const double lap = pot.laplacian(p);
  if (!(lap > 0.0)) throw DomainError("density: Laplacian of Q is not positive at p");
  return std::sqrt(static_cast<double>(n) * lap);
}

// composite Gauss-Legendre in r times equispaced angles on rmin <= |z - c| <= rmax
Grid2D ring_grid(double rmin, double rmax, std::size_t panels, std::size_t order, std::size_t ntheta,
                 Complex c = {0.0, 0.0}) {
  const Quadrature1D q = composite_gauss_legendre(panels, order, rmin, rmax);
  Grid2D g;
  g.layout = GridLayout::Polar;
  g.center = c;
  g.nodes.reserve(q.size() * ntheta);
  g.weights.reserve(q.size() * ntheta);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < ntheta; ++j) {
      g.nodes.push_back(c + std::polar(q.nodes[i], kTwoPi * double(j) / double(ntheta)));
      g.weights.push_back(2.0 * q.nodes[i] * q.weights[i] / double(ntheta));
    }
  return g;
}

// Grid on S + D(0, grow). Disks and annuli are exact; other shapes use a
// masked tensor grid on the bounding box.
Grid2D region_grid(const Droplet& d, double grow, std::size_t n, std::size_t degree) {
  const double sn = std::sqrt(static_cast<double>(n));
  const std::size_t ntheta = std::max<std::size_t>(64, 2 * degree + 8);
  if (const auto* disk = std::get_if<DiskShape>(&d.shape())) {
    const double R = disk->radius + grow;
    const auto panels = static_cast<std::size_t>(std::ceil(2.0 * sn * R)) + 2;
    return ring_grid(0.0, R, panels, 8, ntheta, disk->center);
  }
  if (const auto* ann = std::get_if<AnnulusShape>(&d.shape())) {
    const double r0 = std::max(0.0, ann->inner - grow), r1 = ann->outer + grow;
    const auto panels = static_cast<std::size_t>(std::ceil(2.0 * sn * (r1 - r0))) + 2;
    return ring_grid(r0, r1, panels, 8, ntheta);
  }
  const auto [hx, hy] = d.half_extent();
  const Complex c = d.center();
  const auto px = static_cast<std::size_t>(std::ceil(2.0 * sn * (hx + grow))) + 2;
  const auto py = static_cast<std::size_t>(std::ceil(2.0 * sn * (hy + grow))) + 2;
  const Quadrature1D qx = composite_gauss_legendre(px, 8, c.real() - hx - grow, c.real() + hx + grow);
  const Quadrature1D qy = composite_gauss_legendre(py, 8, c.imag() - hy - grow, c.imag() + hy + grow);
  Grid2D g;
  g.layout = GridLayout::Cartesian;
  g.center = c;
  for (std::size_t i = 0; i < qx.size(); ++i)
    for (std::size_t j = 0; j < qy.size(); ++j) {
      const Complex z(qx.nodes[i], qy.nodes[j]);
      if (d.signed_distance(z) < -grow) continue;
      g.nodes.push_back(z);
      g.weights.push_back(qx.weights[i] * qy.weights[j] / kPi);
    }
  return g;
}

// nodes of the droplet and of its boundary, for sup norms
std::vector<Complex> sup_nodes(const Droplet& d, std::size_t nr, std::size_t ntheta) {
  std::vector<Complex> out = d.interior_grid(nr, ntheta).nodes;
  const std::size_t nb = 4 * ntheta;
  const bool annulus = std::holds_alternative<AnnulusShape>(d.shape());
  for (std::size_t k = 0; k < nb; ++k) {
    const double t = kTwoPi * double(k) / double(nb);
    out.push_back(d.boundary_point(t));
    if (annulus) out.push_back(d.boundary_point(kTwoPi + t));
  }
  return out;
}

std::vector<Complex> gaussian_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Complex> c(n);
  for (auto& v : c) v = Complex(g(rng), g(rng));
  return c;
}

}  // namespace

// ------------------------------------------------------------ moving points

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Bulk: return "bulk";
    case Regime::RegularBoundary: return "regular-boundary";
    default: return "unclassified";
  }
}

MovingPointPlan MovingPointPlan::fixed(Complex p, std::vector<std::size_t> ns) {
  MovingPointPlan plan;
  plan.rule = PlanRule::FixedPoint;
  plan.point = p;
  plan.ns = std::move(ns);
  plan.label = "fixed";
  return plan;
}

MovingPointPlan MovingPointPlan::anchored(Complex p, double tau, std::vector<std::size_t> ns) {
  MovingPointPlan plan;
  plan.rule = PlanRule::BoundaryAnchored;
  plan.point = p;
  plan.tau = tau;
  plan.ns = std::move(ns);
  plan.label = "boundary";
  return plan;
}

Complex plan_point(const MovingPointPlan& plan, const Potential& pot, const Droplet& droplet, std::size_t n) {
  if (plan.rule == PlanRule::FixedPoint) return plan.point;
  const BoundaryPoint b = droplet.nearest_boundary(plan.point);
  if (plan.tau == 0.0) return b.point;
  return b.point - b.normal * (plan.tau / local_scale(pot, b.point, n));
}

Regime classify_regime(const MovingPointPlan& plan, const Droplet& droplet, const Potential& pot,
                       double threshold) {
  if (plan.ns.empty()) throw std::invalid_argument("classify_regime: plan has no n values");
  double lo = kInf, hi = 0.0;
  for (std::size_t n : plan.ns) {
    const Complex p = plan_point(plan, pot, droplet, n);
    if (!droplet.contains(p) && droplet.distance_to_boundary(p) > 1e-12) return Regime::Unclassified;
    const double v = local_scale(pot, p, n) * droplet.distance_to_boundary(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo >= threshold) return Regime::Bulk;
  if (hi <= threshold) return Regime::RegularBoundary;
  return Regime::Unclassified;
}

// ------------------------------------------------------------ counting

std::size_t count_in_disk(const Configuration& cfg, const Potential& pot, Complex p, std::size_t n,
                          double Lambda) {
  if (!(Lambda > 0.0)) throw std::invalid_argument("count_in_disk: Lambda must be positive");
  const double r = Lambda / local_scale(pot, p, n);
  std::size_t c = 0;
  for (const Complex& z : cfg.points)
    if (std::abs(z - p) < r) ++c;
  return c;
}

DensityEstimate bl_density(const std::vector<Configuration>& family, const MovingPointPlan& plan,
                           const Potential& pot, const Droplet& droplet, std::vector<double> lambdas) {
  if (family.empty() || lambdas.empty()) throw std::invalid_argument("bl_density: empty family");
  if (family.size() != plan.ns.size()) throw std::invalid_argument("bl_density: family and plan differ in length");
  std::sort(lambdas.begin(), lambdas.end());
  DensityEstimate est;
  est.plan = plan.label;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const std::size_t n = plan.ns[i];
    const Complex p = plan_point(plan, pot, droplet, n);
    for (double L : lambdas) {
      DensityCell c;
      c.n = n;
      c.lambda = L;
      c.count = count_in_disk(family[i], pot, p, n, L);
      c.ratio = double(c.count) / (L * L);
      est.table.push_back(c);
    }
  }
  std::vector<std::size_t> ns = plan.ns;
  std::sort(ns.begin(), ns.end());
  const std::size_t n_cut = ns[ns.size() >= 2 ? ns.size() - 2 : 0];
  const double l_cut = lambdas[lambdas.size() >= 3 ? lambdas.size() - 3 : 0];
  est.d_plus = 0.0;
  est.d_minus = kInf;
  for (const auto& c : est.table)
    if (c.n >= n_cut && c.lambda >= l_cut) {
      est.d_plus = std::max(est.d_plus, c.ratio);
      est.d_minus = std::min(est.d_minus, c.ratio);
    }
  return est;
}

StripReport strip_count_bound(const Configuration& cfg, const Potential& pot, Complex p, std::size_t n,
                              double Lambda, double T, Complex direction) {
  if (!(Lambda > 0.0) || !(T > 0.0)) throw std::invalid_argument("strip_count_bound: Lambda and T must be positive");
  const double s = local_scale(pot, p, n);
  const Complex u = direction / std::abs(direction);
  StripReport r;
  for (const Complex& z : cfg.points) {
    const Complex w = (z - p) * std::conj(u);
    if (std::abs(w) < Lambda / s && std::abs(w.imag()) <= T / s) ++r.count;
  }
  r.ratio = double(r.count) / (Lambda * Lambda);
  r.constant = double(r.count) / (T * Lambda);
  return r;
}

Configuration line_configuration(const Potential& pot, Complex p, std::size_t n, double Lambda, Complex direction) {
  const double s = local_scale(pot, p, n);
  const Complex u = direction / std::abs(direction);
  Configuration cfg;
  for (double t = 0.5 - std::ceil(Lambda); t < Lambda; t += 1.0) cfg.points.push_back(p + u * (t / s));
  return cfg;
}

// ------------------------------------------------------------ concentration

ConcentrationSpectrum concentration_spectrum(const WeightedBasis& basis, const Potential& pot, Complex p,
                                             std::size_t n, double rho, double Lambda,
                                             const ConcentrationQuadrature& q) {
  const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * rho));
  if (basis.n() != m) throw std::invalid_argument("concentration_spectrum: basis dimension must be round(n rho)");
  if (!(Lambda > 0.0)) throw std::invalid_argument("concentration_spectrum: Lambda must be positive");
  const double rA = Lambda / local_scale(pot, p, n);
  const auto extra = static_cast<std::size_t>(std::ceil(q.angular_factor * double(n) * std::abs(p) * rA));
  const std::size_t ntheta = std::max<std::size_t>(64, 2 * m + 2 + extra);
  const Grid2D g = ring_grid(0.0, rA, q.radial_panels, q.order, ntheta, p);

  using Mat = Eigen::MatrixXcd;
  const std::size_t block = 1024;
  Mat R = Mat::Zero(0, Eigen::Index(m));
  double trace = 0.0;
  std::vector<Complex> phi;
  for (std::size_t start = 0; start < g.size(); start += block) {
    const std::size_t rows = std::min(block, g.size() - start);
    Mat S(R.rows() + static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m));
    S.topRows(R.rows()) = R;
    Mat B(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m));
#pragma omp parallel for schedule(static) private(phi)
    for (std::size_t i = 0; i < rows; ++i) {
      basis.eval(g.nodes[start + i], phi);
      const double sw = std::sqrt(g.weights[start + i]);
      for (std::size_t k = 0; k < m; ++k) B(Eigen::Index(i), Eigen::Index(k)) = sw * std::conj(phi[k]);
    }
    trace += B.squaredNorm();
    S.bottomRows(Eigen::Index(rows)) = B;
    Eigen::HouseholderQR<Mat> qr(S);
    const Eigen::Index k = std::min<Eigen::Index>(S.rows(), Eigen::Index(m));
    R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  }
  // R inherits the column grading of B; one-sided Jacobi after a pivoted QR
  // keeps relative accuracy for the tiny singular values
  Eigen::JacobiSVD<Mat, Eigen::ColPivHouseholderQRPreconditioner> svd(R);
  const Eigen::VectorXd sv = svd.singularValues();

  ConcentrationSpectrum s;
  s.n = n;
  s.rho = rho;
  s.lambda = Lambda;
  s.p = p;
  s.m = m;
  s.eigenvalues.resize(m, 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) s.eigenvalues[std::size_t(i)] = sv[i] * sv[i];
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
  s.trace = trace;
  const Mat M = R.adjoint() * R;
  s.trace_sq = M.squaredNorm();

  const Grid2D fine = ring_grid(0.0, rA, 2 * q.radial_panels, q.order, ntheta + ntheta / 2 + 1, p);
  s.trace_direct = integrate2d_real(fine, [&](Complex z) { return basis.one_point(z); });
  return s;
}

double trace_defect(const ConcentrationSpectrum& s) { return (s.trace - s.trace_sq) / (s.lambda * s.lambda); }

std::vector<CountingCheck> counting_inequalities(const ConcentrationSpectrum& s, const std::vector<double>& gammas) {
  std::vector<CountingCheck> out;
  const double defect = s.trace - s.trace_sq;
  for (double g : gammas) {
    if (!(g > 0.0 && g < 1.0)) throw std::invalid_argument("counting_inequalities: gamma must lie in (0, 1)");
    CountingCheck c;
    c.gamma = g;
    for (double l : s.eigenvalues) {
      if (l > g) ++c.above;
      if (l >= g) ++c.at_least;
    }
    c.lower = s.trace - defect / (1.0 - g);
    c.upper = s.trace + defect / g;
    const double slack = 1e-9 * std::max(1.0, s.trace);
    c.holds = double(c.above) >= c.lower - slack && double(c.at_least) <= c.upper + slack;
    out.push_back(c);
  }
  return out;
}

bool spectrum_in_unit_interval(const ConcentrationSpectrum& s, double tol) {
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const double l = s.eigenvalues[i];
    if (!(l >= -tol && l <= 1.0 + tol)) return false;
    if (i > 0 && l > s.eigenvalues[i - 1]) return false;
  }
  return true;
}

// ------------------------------------------------------------ lagrange

LagrangeBasis::LagrangeBasis(const Potential& pot, const Configuration& cfg) : pot_(pot), nodes_(cfg.points) {
  const std::size_t n = nodes_.size();
  log_denom_.assign(n, 0.0);
  q_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    q_[j] = pot(nodes_[j]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const Complex d = nodes_[j] - nodes_[i];
      if (std::abs(d) < kCollisionDistance) throw CollisionError("LagrangeBasis: coincident nodes");
      log_denom_[j] += std::log(d);
    }
  }
}

void LagrangeBasis::eval(Complex z, std::vector<Complex>& out) const {
  const std::size_t n = nodes_.size();
  out.assign(n, 0.0);
  const double nn = static_cast<double>(n);
  const double qz = pot_(z);
  for (std::size_t k = 0; k < n; ++k)
    if (z == nodes_[k]) {
      out[k] = 1.0;
      return;
    }
  Complex S = 0.0;
  for (const Complex& x : nodes_) S += std::log(z - x);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = std::exp(S - std::log(z - nodes_[j]) - log_denom_[j] - 0.5 * nn * (qz - q_[j]));
}

Complex LagrangeBasis::eval(std::size_t j, Complex z) const {
  const std::size_t n = nodes_.size();
  if (z == nodes_[j]) return 1.0;
  Complex S = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) continue;
    if (z == nodes_[i]) return 0.0;
    S += std::log(z - nodes_[i]);
  }
  return std::exp(S - log_denom_[j] - 0.5 * double(n) * (pot_(z) - q_[j]));
}

LagrangeReport lagrange_report(const Potential& pot, const Droplet& droplet, const Configuration& cfg,
                               std::size_t nr, std::size_t ntheta) {
  const LagrangeBasis L(pot, cfg);
  const std::size_t n = L.n();
  LagrangeReport rep;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      rep.cardinality_error = std::max(rep.cardinality_error, std::abs(L.eval(j, cfg.points[k]) - (j == k ? 1.0 : 0.0)));
  std::vector<Complex> pts = sup_nodes(droplet, nr, ntheta);
  pts.insert(pts.end(), cfg.points.begin(), cfg.points.end());
  std::vector<double> sup(n, 0.0);
#pragma omp parallel
  {
    std::vector<double> local(n, 0.0);
    std::vector<Complex> v;
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < pts.size(); ++i) {
      L.eval(pts[i], v);
      for (std::size_t j = 0; j < n; ++j) local[j] = std::max(local[j], std::abs(v[j]));
    }
#pragma omp critical
    for (std::size_t j = 0; j < n; ++j) sup[j] = std::max(sup[j], local[j]);
  }
  for (std::size_t j = 0; j < n; ++j)
    if (sup[j] > rep.max_sup) {
      rep.max_sup = sup[j];
      rep.argmax = j;
    }
  return rep;
}

// ------------------------------------------------------------ bernstein

BernsteinReport bernstein_check(const Potential& pot, const WeightedBasis& basis, const Droplet& droplet,
                                std::size_t samples, std::uint64_t seed, bool constant_only) {
  const std::size_t m = basis.n();
  const double nn = static_cast<double>(m);
  std::mt19937_64 rng(detail::derive_seed(seed, 0));
  const std::vector<Complex> inside = sup_nodes(droplet, 60, 256);
  // outside S: a ring of points beyond the boundary
  std::vector<Complex> outside;
  for (double grow : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8})
    for (std::size_t k = 0; k < 512; ++k) {
      const double t = kTwoPi * double(k) / 512.0;
      const BoundaryPoint b = droplet.nearest_boundary(droplet.boundary_point(t));
      outside.push_back(b.point + grow * b.normal);
    }
  // evaluation points for the ratio: interior grid nodes strictly inside S
  std::vector<Complex> eval_pts;
  for (const Complex& z : droplet.interior_grid(24, 96).nodes) eval_pts.push_back(z);

  BernsteinReport rep;
  const std::size_t trials = constant_only ? 1 : samples;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Complex> c(m, 0.0);
    if (constant_only)
      c[0] = 1.0;
    else
      c = gaussian_vector(rng, m);
    std::vector<Complex> phi, dphi;
    auto f = [&](Complex z) {
      basis.eval(z, phi);
      Complex s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += c[k] * phi[k];
      return s;
    };
    double sup_in = 0.0, sup_out = 0.0;
    for (const Complex& z : inside) sup_in = std::max(sup_in, std::abs(f(z)));
    for (const Complex& z : outside) sup_out = std::max(sup_out, std::abs(f(z)));
    rep.max_principle_ratio = std::max(rep.max_principle_ratio, sup_out / sup_in);
    for (const Complex& z : eval_pts) {
      basis.eval_with_derivative(z, phi, dphi);
      Complex fv = 0.0, dv = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        fv += c[k] * phi[k];
        dv += c[k] * dphi[k];
      }
      if (std::abs(fv) < 1e-8 * sup_in) continue;
      const double grad = std::abs(dv - nn * pot.dz(z) * fv);
      rep.max_ratio = std::max(rep.max_ratio, grad / (std::sqrt(std::exp(1.0) * nn * pot.laplacian(z)) * sup_in));
      const double h = 1e-5 / std::sqrt(nn);
      const double gx = (std::abs(f(z + h)) - std::abs(f(z - h))) / (2 * h);
      const double gy = (std::abs(f(z + Complex(0, h))) - std::abs(f(z - Complex(0, h)))) / (2 * h);
      const double fd = std::hypot(gx, gy);
      rep.fd_agreement = std::max(rep.fd_agreement, std::abs(fd - grad) / std::max(grad, 1e-3 * std::sqrt(nn) * sup_in));
    }
  }
  return rep;
}

// ------------------------------------------------------------ certificates

InterpolationCertificate interpolation_certificate(const Potential& pot, const Droplet& droplet,
                                                   const Configuration& cfg, double rho, std::size_t trials,
                                                   std::uint64_t seed) {
  if (!(rho > 1.0)) throw std::invalid_argument("interpolation_certificate: rho must exceed 1");
  const std::size_t n = cfg.n();
  const double eps = 0.5 * (rho - 1.0);
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(eps * double(n))));
  const WeightedBasis kb = WeightedBasis::build(pot, m);
  const LagrangeBasis L(pot, cfg);

  // phi_k(z_j) and R_m(z_j)
  std::vector<std::vector<Complex>> node_phi(n);
  std::vector<double> node_R(n);
  InterpolationCertificate cert;
  cert.kernel_degree = m;
  cert.min_node_ratio = kInf;
  for (std::size_t j = 0; j < n; ++j) {
    kb.eval(cfg.points[j], node_phi[j]);
    double r = 0.0;
    for (const auto& v : node_phi[j]) r += std::norm(v);
    node_R[j] = r;
    if (!(r > 0.0)) throw DomainError("interpolation_certificate: kernel diagonal vanishes at a node");
    cert.min_node_ratio = std::min(cert.min_node_ratio, r / double(m));
  }

  std::mt19937_64 rng(detail::derive_seed(seed, 1));
  std::vector<std::vector<Complex>> cs;
  for (std::size_t t = 0; t < trials; ++t) cs.push_back(gaussian_vector(rng, n));

  auto Lvals = [&](Complex z, std::vector<Complex>& ell, std::vector<Complex>& phi, std::vector<Complex>& out) {
    L.eval(z, ell);
    kb.eval(z, phi);
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      Complex k = 0.0;
      for (std::size_t i = 0; i < m; ++i) k += phi[i] * std::conj(node_phi[j][i]);
      const Complex a = k / node_R[j];
      out[j] = a * a * ell[j];
    }
  };

  // interpolation property at the nodes
  {
    std::vector<Complex> ell, phi, Lv;
    for (std::size_t k = 0; k < n; ++k) {
      Lvals(cfg.points[k], ell, phi, Lv);
      for (const auto& c : cs) {
        Complex f = 0.0;
        double cmax = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          f += c[j] * Lv[j];
          cmax = std::max(cmax, std::abs(c[j]));
        }
        cert.interpolation_error = std::max(cert.interpolation_error, std::abs(f - c[k]) / cmax);
      }
    }
  }

  const std::size_t degree = (n - 1) + 2 * (m - 1);
  const Grid2D g = region_grid(droplet, 8.0 / std::sqrt(double(n)), n, degree);
  std::vector<double> norms(trials, 0.0);
#pragma omp parallel
  {
    std::vector<double> local(trials, 0.0);
    std::vector<Complex> ell, phi, Lv;
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < g.size(); ++i) {
      Lvals(g.nodes[i], ell, phi, Lv);
      for (std::size_t t = 0; t < trials; ++t) {
        Complex f = 0.0;
        for (std::size_t j = 0; j < n; ++j) f += cs[t][j] * Lv[j];
        local[t] += g.weights[i] * std::norm(f);
      }
    }
#pragma omp critical
    for (std::size_t t = 0; t < trials; ++t) norms[t] += local[t];
  }
  for (std::size_t t = 0; t < trials; ++t) {
    double c2 = 0.0;
    for (const auto& v : cs[t]) c2 += std::norm(v);
    cert.constant = std::max(cert.constant, double(n) * norms[t] / c2);
  }
  return cert;
}

MFamilyCertificate m_family_certificate(const Potential& pot, const Droplet& droplet, const Configuration& cfg,
                                        double rho, double s, std::size_t trials, std::uint64_t seed) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("m_family_certificate: rho must lie in (0, 1)");
  if (!(s > 0.0)) throw std::invalid_argument("m_family_certificate: s must be positive");
  const std::size_t n = cfg.n();
  const double sn = std::sqrt(double(n));
  MFamilyCertificate cert;
  double dmin = kInf;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) dmin = std::min(dmin, std::abs(cfg.points[j] - cfg.points[k]));
  cert.separation = sn * dmin;
  if (cert.separation < 2.0 * s)
    throw ConfigurationError("m_family_certificate: configuration is not 2s-separated");

  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(rho * double(n))));
  const WeightedBasis b = WeightedBasis::build(pot, m);
  std::mt19937_64 rng(detail::derive_seed(seed, 2));
  std::vector<std::vector<Complex>> cs;
  for (std::size_t t = 0; t < trials; ++t) cs.push_back(gaussian_vector(rng, m));

  const Grid2D g = region_grid(droplet, s / sn, n, m);
  std::vector<double> area(trials, 0.0), sample(trials, 0.0);
#pragma omp parallel
  {
    std::vector<double> la(trials, 0.0);
    std::vector<Complex> phi;
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < g.size(); ++i) {
      b.eval(g.nodes[i], phi);
      for (std::size_t t = 0; t < trials; ++t) {
        Complex f = 0.0;
        for (std::size_t k = 0; k < m; ++k) f += cs[t][k] * phi[k];
        la[t] += g.weights[i] * std::norm(f);
      }
    }
#pragma omp critical
    for (std::size_t t = 0; t < trials; ++t) area[t] += la[t];
  }
  std::vector<Complex> phi;
  for (const Complex& z : cfg.points) {
    b.eval(z, phi);
    for (std::size_t t = 0; t < trials; ++t) {
      Complex f = 0.0;
      for (std::size_t k = 0; k < m; ++k) f += cs[t][k] * phi[k];
      sample[t] += std::norm(f) / double(n);
    }
  }
  cert.min_sample_norm = kInf;
  for (std::size_t t = 0; t < trials; ++t) {
    cert.constant = std::max(cert.constant, area[t] / sample[t]);
    cert.converse = std::max(cert.converse, s * s * sample[t] / area[t]);
    cert.min_sample_norm = std::min(cert.min_sample_norm, sample[t] / area[t]);
  }
  return cert;
}

// ------------------------------------------------------------ sampler cross-check

HistogramCheck sampler_histogram(const Potential& pot, std::size_t n, const MetropolisConfig& mc,
                                 std::size_t bins, double rmax, std::size_t batches) {
  if (!pot.radial()) throw std::invalid_argument("sampler_histogram: potential must be radial");
  if (bins == 0 || batches < 2) throw std::invalid_argument("sampler_histogram: need bins and >= 2 batches");
  const SampleResult res = metropolis_sample(pot, n, mc, 1);
  const std::size_t S = res.snapshots.size();
  if (S < batches) throw std::invalid_argument("sampler_histogram: fewer snapshots than batches");

  HistogramCheck out;
  out.snapshots = S;
  out.acceptance_rate = res.acceptance_rate;
  const double h = rmax / double(bins);
  // fractions per snapshot; the last bin also takes r >= rmax
  std::vector<std::vector<double>> frac(bins, std::vector<double>(S, 0.0));
  for (std::size_t s = 0; s < S; ++s)
    for (const Complex& z : res.snapshots[s].points) {
      const auto k = std::min<std::size_t>(bins - 1, static_cast<std::size_t>(std::abs(z) / h));
      frac[k][s] += 1.0 / double(n);
    }

  const WeightedBasis b = WeightedBasis::build(pot, n);
  auto band = [&](double r0, double r1) {
    const Quadrature1D q = composite_gauss_legendre(4, 16, r0, r1);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) acc += q.weights[i] * 2.0 * q.nodes[i] * b.one_point(q.nodes[i]);
    return acc / double(n);
  };
  const double tail_end = std::max(rmax, b.reach());
  const std::size_t per = S / batches;
  for (std::size_t k = 0; k < bins; ++k) {
    HistogramBin bin;
    bin.r0 = h * double(k);
    bin.r1 = (k + 1 == bins) ? tail_end : h * double(k + 1);
    bin.expected = band(bin.r0, bin.r1);
    std::vector<double> means(batches, 0.0);
    for (std::size_t t = 0; t < batches; ++t) {
      for (std::size_t s = t * per; s < (t + 1) * per; ++s) means[t] += frac[k][s];
      means[t] /= double(per);
    }
    double mean = 0.0;
    for (double v : means) mean += v;
    mean /= double(batches);
    double var = 0.0;
    for (double v : means) var += (v - mean) * (v - mean);
    var /= double(batches - 1);
    bin.observed = mean;
    bin.std_error = std::sqrt(var / double(batches));
    bin.z_score = bin.std_error > 0.0 ? std::abs(mean - bin.expected) / bin.std_error
                                      : (std::abs(mean - bin.expected) > 1e-12 ? kInf : 0.0);
    out.max_z = std::max(out.max_z, bin.z_score);
    out.bins.push_back(bin);
  }
  return out;
}

}  // namespace coulomb
