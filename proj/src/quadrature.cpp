#include "coulomb/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace coulomb {

namespace {

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const double nn = static_cast<double>(n);
  const double dp = nn * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

template <typename T>
T cascade(std::span<const T> v) {
  constexpr std::size_t kLeaf = 32;
  if (v.size() <= kLeaf) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return cascade(v.first(half)) + cascade(v.subspan(half));
}

void check_finite(const Complex& v, std::size_t i, const Complex& z) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream os;
    os << "integrate2d: non-finite sample at node " << i << " (" << z << ")";
    throw IntegrationError(os.str());
  }
}

}  // namespace

Quadrature1D gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  Quadrature1D q;
  q.a = a;
  q.b = b;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double nn = static_cast<double>(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // nodes ascending
    q.nodes[i] = mid - half * x;
    q.nodes[n - 1 - i] = mid + half * x;
    q.weights[i] = half * w;
    q.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = mid;
  return q;
}

Quadrature1D composite_gauss_legendre(std::size_t panels, std::size_t order, double a, double b) {
  if (panels == 0) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
  const Quadrature1D ref = gauss_legendre(order, 0.0, 1.0);
  Quadrature1D q;
  q.a = a;
  q.b = b;
  const double h = (b - a) / static_cast<double>(panels);
  q.nodes.reserve(panels * order);
  q.weights.reserve(panels * order);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    for (std::size_t i = 0; i < order; ++i) {
      q.nodes.push_back(lo + h * ref.nodes[i]);
      q.weights.push_back(h * ref.weights[i]);
    }
  }
  return q;
}

Grid2D annular_grid(double rmin, double rmax, std::size_t nr, std::size_t ntheta, Complex center) {
  if (!(rmax > 0.0) || !(rmin >= 0.0) || !(rmin < rmax)) {
    throw std::invalid_argument("polar_grid: need 0 <= rmin < rmax");
  }
  if (nr == 0 || ntheta == 0) throw std::invalid_argument("polar_grid: zero resolution");
  const Quadrature1D rq = gauss_legendre(nr, rmin, rmax);
  Grid2D g;
  g.layout = GridLayout::Polar;
  g.center = center;
  g.nodes.reserve(nr * ntheta);
  g.weights.reserve(nr * ntheta);
  const double dtheta = 1.0 / static_cast<double>(ntheta);
  for (std::size_t j = 0; j < ntheta; ++j) {
    const Complex dir = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) * dtheta);
    for (std::size_t i = 0; i < nr; ++i) {
      const double r = rq.nodes[i];
      g.nodes.push_back(center + r * dir);
      g.weights.push_back(2.0 * r * rq.weights[i] * dtheta);
    }
  }
  return g;
}

Grid2D polar_grid(double rmax, std::size_t nr, std::size_t ntheta, Complex center) {
  return annular_grid(0.0, rmax, nr, ntheta, center);
}

Grid2D cartesian_grid(double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("cartesian_grid: zero resolution");
  const Quadrature1D qx = gauss_legendre(nx, x0, x1);
  const Quadrature1D qy = gauss_legendre(ny, y0, y1);
  Grid2D g;
  g.layout = GridLayout::Cartesian;
  g.center = Complex(0.5 * (x0 + x1), 0.5 * (y0 + y1));
  g.nodes.reserve(nx * ny);
  g.weights.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      g.nodes.emplace_back(qx.nodes[i], qy.nodes[j]);
      g.weights.push_back(qx.weights[i] * qy.weights[j] / kPi);
    }
  }
  return g;
}

double pairwise_sum(std::span<const double> values) { return cascade(values); }
Complex pairwise_sum(std::span<const Complex> values) { return cascade(values); }

Complex integrate_samples(const Grid2D& grid, std::span<const Complex> samples) {
  if (samples.size() != grid.size()) throw std::invalid_argument("integrate_samples: size mismatch");
  std::vector<Complex> terms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    check_finite(samples[i], i, grid.nodes[i]);
    terms[i] = grid.weights[i] * samples[i];
  }
  return pairwise_sum(terms);
}

double integrate_samples(const Grid2D& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) throw std::invalid_argument("integrate_samples: size mismatch");
  std::vector<double> terms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    check_finite(samples[i], i, grid.nodes[i]);
    terms[i] = grid.weights[i] * samples[i];
  }
  return pairwise_sum(terms);
}

Complex integrate2d(const Grid2D& grid, const std::function<Complex(Complex)>& f) {
  const std::size_t n = grid.size();
  std::vector<Complex> samples(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) samples[i] = f(grid.nodes[i]);
  return integrate_samples(grid, samples);
}

double integrate2d_real(const Grid2D& grid, const std::function<double(Complex)>& f) {
  const std::size_t n = grid.size();
  std::vector<double> samples(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) samples[i] = f(grid.nodes[i]);
  return integrate_samples(grid, samples);
}

}  // namespace coulomb
