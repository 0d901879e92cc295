#include "coulomb/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace coulomb {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// max-shifted sum of exp(a_k) e^{i k phi}, returned as (log scale, sum)
std::pair<double, Complex> log_series(const std::vector<double>& a, double phi) {
  double m = -kInf;
  for (double v : a) m = std::max(m, v);
  Complex s = 0.0;
  if (m == -kInf) return {m, s};
  const Complex step = std::polar(1.0, phi);
  Complex e = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > -kInf) s += std::exp(a[k] - m) * e;
    e *= step;
    if ((k & 31u) == 31u) e /= std::abs(e);
  }
  return {m, s};
}

Quadrature1D radial_rule(double reach, std::size_t n, double per_scale, std::size_t order,
                         std::size_t min_panels) {
  const auto panels = std::max<std::size_t>(
      min_panels, static_cast<std::size_t>(std::ceil(per_scale * std::sqrt(double(n)) * reach)));
  return composite_gauss_legendre(panels, order, 0.0, reach);
}

double radial_reach(const Potential& pot, std::size_t n, double drop) {
  // log of r^{2k+1} e^{-n q(r)} for k in a few representative degrees
  const double nn = static_cast<double>(n);
  std::vector<double> ks{0.0, std::floor(0.5 * (nn - 1.0)), nn - 1.0};
  auto L = [&](double k, double r) { return (2.0 * k + 1.0) * std::log(r) - nn * pot.radial_value(r); };
  const Droplet d = solve_droplet_radial(pot);
  const double h = 1.0 / std::sqrt(nn);
  double reach = d.outer_radius() + h;
  for (int it = 0; it < 100000; ++it) {
    bool ok = true;
    for (double k : ks) {
      double peak = -kInf;
      const int m = 400;
      for (int i = 1; i <= m; ++i) peak = std::max(peak, L(k, reach * i / m));
      if (peak - L(k, reach) < drop) ok = false;
    }
    if (ok) return reach;
    reach += h;
  }
  throw ConfigurationError("basis: could not bound the radial weight");
}

}  // namespace

WeightedBasis WeightedBasis::build(const Potential& pot, std::size_t n, const BasisOptions& opt) {
  if (n == 0) throw std::invalid_argument("basis: n must be positive");
  if (!pot.radial()) {
    const Droplet d = droplet_for(pot);
    const auto [hx, hy] = d.half_extent();
    const Complex c = d.center();
    const double m = opt.margin / std::sqrt(static_cast<double>(n));
    const std::size_t order = 10;
    const std::size_t panels = std::max<std::size_t>(1, opt.grid_nodes / order);
    const Quadrature1D qx = composite_gauss_legendre(panels, order, c.real() - hx - m, c.real() + hx + m);
    const Quadrature1D qy = composite_gauss_legendre(panels, order, c.imag() - hy - m, c.imag() + hy + m);
    Grid2D g;
    g.layout = GridLayout::Cartesian;
    g.center = c;
    for (std::size_t i = 0; i < qx.size(); ++i)
      for (std::size_t j = 0; j < qy.size(); ++j) {
        g.nodes.emplace_back(qx.nodes[i], qy.nodes[j]);
        g.weights.push_back(qx.weights[i] * qy.weights[j] / kPi);
      }
    return build_on_grid(pot, n, g, opt.breakdown);
  }

  WeightedBasis b(pot);
  b.n_ = n;
  b.radial_ = true;
  b.reach_ = radial_reach(pot, n, opt.tail_drop);
  const double nn = static_cast<double>(n);

  const Quadrature1D q = radial_rule(b.reach_, n, opt.panels_per_scale, opt.order, 64);
  std::vector<double> lr(q.size()), base(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q.nodes[i];
    lr[i] = std::log(r);
    base[i] = std::log(2.0 * r * q.weights[i]) - nn * pot.radial_value(r);
  }
  b.log_h_.resize(n);
  std::vector<double> t(q.size());
#pragma omp parallel for schedule(static) firstprivate(t)
  for (std::size_t k = 0; k < n; ++k) {
    double m = -kInf;
    for (std::size_t i = 0; i < q.size(); ++i) {
      t[i] = 2.0 * double(k) * lr[i] + base[i];
      m = std::max(m, t[i]);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += std::exp(t[i] - m);
    b.log_h_[k] = m + std::log(s);
  }

  // plane grid: angular trapezoid exact for |freq| <= n, coarser radial rule
  const Quadrature1D qr = radial_rule(b.reach_, n, 2.0, 8, 32);
  const std::size_t nt = n + 2;
  b.grid_.layout = GridLayout::Polar;
  b.grid_.nodes.reserve(qr.size() * nt);
  for (std::size_t i = 0; i < qr.size(); ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      b.grid_.nodes.push_back(std::polar(qr.nodes[i], kTwoPi * double(j) / double(nt)));
      b.grid_.weights.push_back(2.0 * qr.nodes[i] * qr.weights[i] / double(nt));
    }
  return b;
}

WeightedBasis WeightedBasis::build_on_grid(const Potential& pot, std::size_t n, const Grid2D& grid,
                                           double breakdown) {
  if (n == 0) throw std::invalid_argument("basis: n must be positive");
  WeightedBasis b(pot);
  b.n_ = n;
  b.radial_ = false;
  b.grid_ = grid;
  const std::size_t m = grid.size();
  const double nn = static_cast<double>(n);
  for (const Complex& z : grid.nodes) b.reach_ = std::max(b.reach_, std::abs(z - grid.center));

  // columns V_k(i) = sqrt(w_i) phi_k(z_i)
  std::vector<std::vector<Complex>> V(n, std::vector<Complex>(m));
  double norm0 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    V[0][i] = std::sqrt(grid.weights[i]) * std::exp(-0.5 * nn * pot(grid.nodes[i]));
    norm0 += std::norm(V[0][i]);
  }
  norm0 = std::sqrt(norm0);
  if (!(norm0 > 0.0)) throw ConditioningError("basis: weight vanishes on the grid", 0);
  for (auto& v : V[0]) v /= norm0;
  b.q0_ = 1.0 / norm0;

  b.hess_re_.assign((n + 1) * n, 0.0);
  b.hess_im_.assign((n + 1) * n, 0.0);
  std::vector<Complex> u(m);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) u[i] = grid.nodes[i] * V[k][i];
    double before = 0.0;
    for (const auto& v : u) before += std::norm(v);
    before = std::sqrt(before);
    std::vector<Complex> h(k + 1, 0.0), c(k + 1);
    for (int pass = 0; pass < 2; ++pass) {
#pragma omp parallel for schedule(static)
      for (std::size_t j = 0; j <= k; ++j) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += std::conj(V[j][i]) * u[i];
        c[j] = acc;
      }
      for (std::size_t j = 0; j <= k; ++j) {
        h[j] += c[j];
        for (std::size_t i = 0; i < m; ++i) u[i] -= c[j] * V[j][i];
      }
    }
    double after = 0.0;
    for (const auto& v : u) after += std::norm(v);
    after = std::sqrt(after);
    if (!(after > breakdown * before)) {
      throw ConditioningError("basis: Arnoldi breakdown at degree " + std::to_string(k + 1) +
                                  "; max stable degree " + std::to_string(k),
                              k);
    }
    for (std::size_t j = 0; j <= k; ++j) {
      b.hess_re_[k * (n + 1) + j] = h[j].real();
      b.hess_im_[k * (n + 1) + j] = h[j].imag();
    }
    b.hess_re_[k * (n + 1) + k + 1] = after;
    for (std::size_t i = 0; i < m; ++i) V[k + 1][i] = u[i] / after;
  }
  return b;
}

void WeightedBasis::eval(Complex z, std::vector<Complex>& phi) const {
  phi.assign(n_, 0.0);
  const double nn = static_cast<double>(n_);
  const double qz = pot_(z);
  if (radial_) {
    const double r = std::abs(z);
    if (r == 0.0) {
      phi[0] = std::exp(-0.5 * log_h_[0] - 0.5 * nn * qz);
      return;
    }
    const double lr = std::log(r);
    const Complex step = z / r;
    Complex e = 1.0;
    for (std::size_t k = 0; k < n_; ++k) {
      phi[k] = std::exp(double(k) * lr - 0.5 * log_h_[k] - 0.5 * nn * qz) * e;
      e *= step;
    }
    return;
  }
  phi[0] = q0_ * std::exp(-0.5 * nn * qz);
  for (std::size_t k = 0; k + 1 < n_; ++k) {
    Complex v = z * phi[k];
    for (std::size_t j = 0; j <= k; ++j)
      v -= Complex(hess_re_[k * (n_ + 1) + j], hess_im_[k * (n_ + 1) + j]) * phi[j];
    phi[k + 1] = v / hess_re_[k * (n_ + 1) + k + 1];
  }
}

void WeightedBasis::eval_with_derivative(Complex z, std::vector<Complex>& phi,
                                         std::vector<Complex>& dphi) const {
  eval(z, phi);
  dphi.assign(n_, 0.0);
  const double nn = static_cast<double>(n_);
  if (radial_) {
    const double r = std::abs(z);
    const double qz = pot_(z);
    if (r == 0.0) {
      if (n_ > 1) dphi[1] = std::exp(-0.5 * log_h_[1] - 0.5 * nn * qz);
      return;
    }
    const double lr = std::log(r);
    const Complex step = z / r;
    Complex e = 1.0;
    for (std::size_t k = 1; k < n_; ++k) {
      dphi[k] = double(k) * std::exp(double(k - 1) * lr - 0.5 * log_h_[k] - 0.5 * nn * qz) * e;
      e *= step;
    }
    return;
  }
  for (std::size_t k = 0; k + 1 < n_; ++k) {
    Complex v = phi[k] + z * dphi[k];
    for (std::size_t j = 0; j <= k; ++j)
      v -= Complex(hess_re_[k * (n_ + 1) + j], hess_im_[k * (n_ + 1) + j]) * dphi[j];
    dphi[k + 1] = v / hess_re_[k * (n_ + 1) + k + 1];
  }
}

Complex WeightedBasis::kernel(Complex z, Complex w) const {
  const double nn = static_cast<double>(n_);
  if (radial_) {
    const double rz = std::abs(z), rw = std::abs(w);
    const double shift = -0.5 * nn * (pot_(z) + pot_(w));
    if (rz == 0.0 || rw == 0.0) return std::exp(shift - log_h_[0]);
    const double lzw = std::log(rz) + std::log(rw);
    std::vector<double> a(n_);
    for (std::size_t k = 0; k < n_; ++k) a[k] = double(k) * lzw - log_h_[k];
    const auto [m, s] = log_series(a, std::arg(z) - std::arg(w));
    return std::exp(m + shift) * s;
  }
  std::vector<Complex> pz, pw;
  eval(z, pz);
  eval(w, pw);
  Complex s = 0.0;
  for (std::size_t k = 0; k < n_; ++k) s += pz[k] * std::conj(pw[k]);
  return s;
}

double WeightedBasis::one_point(Complex z) const {
  if (radial_) return kernel(z, z).real();
  std::vector<Complex> pz;
  eval(z, pz);
  double s = 0.0;
  for (const auto& v : pz) s += std::norm(v);
  return s;
}

Complex kernel_eval(const KernelModel& km, Complex z, Complex w) { return km.basis().kernel(z, w); }
double one_point(const KernelModel& km, Complex z) { return km.basis().one_point(z); }

RescaleFrame rescale_frame(const Potential& pot, const Droplet& droplet, Complex p, std::size_t n) {
  const double lap = pot.laplacian(p);
  if (!(lap > 0.0)) throw DomainError("rescale_frame: Laplacian of Q is not positive at p");
  RescaleFrame f;
  f.p = p;
  f.theta = std::arg(droplet.nearest_boundary(p).normal);
  f.scale = std::sqrt(static_cast<double>(n) * lap);
  return f;
}

double rescaled_one_point(const KernelModel& km, const RescaleFrame& f, Complex z) {
  return km.basis().one_point(f.inverse(z)) / (f.scale * f.scale);
}

Complex rescaled_kernel(const KernelModel& km, const RescaleFrame& f, Complex z, Complex w) {
  return km.basis().kernel(f.inverse(z), f.inverse(w)) / (f.scale * f.scale);
}

double berezin(const KernelModel& km, const RescaleFrame& f, Complex z, Complex w) {
  const double r = rescaled_one_point(km, f, z);
  if (!(r > 0.0)) throw DomainError("berezin: one-point function vanishes at z");
  return std::norm(rescaled_kernel(km, f, z, w)) / r;
}

double berezin_mass(const KernelModel& km, const RescaleFrame& f, Complex z) {
  // dA(w) in rescaled coordinates is s^2 dA(eta)
  const WeightedBasis& b = km.basis();
  const Complex zeta = f.inverse(z);
  const double r = b.one_point(zeta);
  if (!(r > 0.0)) throw DomainError("berezin_mass: one-point function vanishes at z");
  const double mass = integrate2d_real(b.grid(), [&](Complex eta) { return std::norm(b.kernel(zeta, eta)); });
  return mass / r;
}

Complex reproducing_integral(const KernelModel& km, Complex z) {
  const WeightedBasis& b = km.basis();
  return integrate2d(b.grid(), [&](Complex eta) { return b.kernel(z, eta) * b.kernel(eta, z); });
}

double gram_defect(const WeightedBasis& b, const Grid2D& grid) {
  const std::size_t n = b.n();
  std::vector<Complex> G(n * n, 0.0);
  std::vector<Complex> phi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    b.eval(grid.nodes[i], phi);
    const double w = grid.weights[i];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) G[j * n + k] += w * phi[j] * std::conj(phi[k]);
  }
  double d = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(G[j * n + k] - (j == k ? 1.0 : 0.0)));
  return d;
}

}  // namespace coulomb
