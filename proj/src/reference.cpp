#include "coulomb/reference.hpp"

#include <cmath>

namespace coulomb::reference {

double energy(const Potential& pot, const Configuration& cfg) {
  const auto& p = cfg.points;
  const double n = static_cast<double>(p.size());
  double h = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (std::size_t k = j + 1; k < p.size(); ++k) {
      const double d = std::abs(p[j] - p[k]);
      if (d < kCollisionDistance) return kInf;
      h -= 2.0 * std::log(d);
    }
    h += n * pot(p[j]);
  }
  return h;
}

std::vector<Complex> energy_gradient(const Potential& pot, const Configuration& cfg) {
  const auto& p = cfg.points;
  const double n = static_cast<double>(p.size());
  std::vector<Complex> g(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) g[j] = n * pot.grad(p[j]);
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (std::size_t k = j + 1; k < p.size(); ++k) {
      const Complex d = p[j] - p[k];
      const double r2 = std::norm(d);
      if (r2 < kCollisionDistance * kCollisionDistance) throw CollisionError("coincident points");
      g[j] -= 2.0 * d / r2;
      g[k] += 2.0 * d / r2;
    }
  }
  return g;
}

double integrate2d_real(const Grid2D& grid, const std::function<double(Complex)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weights[i] * f(grid.nodes[i]);
  return s;
}

}  // namespace coulomb::reference
