#pragma once

// Angular quadrature around a point. Smooth periodic integrands use the
// trapezoid rule; when the integrand has square-root kinks at known angles
// (rays grazing a boundary), each arc between kinks gets Gauss-Legendre
// nodes after the substitution theta = a + L (1 - cos(pi s)) / 2, which makes
// sqrt(theta - a) behaviour analytic in s.

#include <algorithm>
#include <cmath>
#include <vector>

#include "coulomb/common.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb::detail {

template <typename T, typename F>
T integrate_angle(std::vector<double> breaks, std::size_t ntheta, F&& g) {
  constexpr double kTwoPi = 2.0 * kPi;
  T total{};
  if (breaks.empty()) {
    const double h = kTwoPi / static_cast<double>(ntheta);
    for (std::size_t j = 0; j < ntheta; ++j) total += g(h * static_cast<double>(j));
    return total * h;
  }
  for (double& b : breaks) {
    b = std::fmod(b, kTwoPi);
    if (b < 0.0) b += kTwoPi;
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double u, double v) { return std::abs(u - v) < 1e-14; }),
               breaks.end());
  const std::size_t m = breaks.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double lo = breaks[i];
    const double hi = (i + 1 < m) ? breaks[i + 1] : breaks[0] + kTwoPi;
    const double len = hi - lo;
    if (len <= 0.0) continue;
    const auto k = std::max<std::size_t>(
        16, static_cast<std::size_t>(std::ceil(static_cast<double>(ntheta) * len / kTwoPi)));
    const Quadrature1D q = gauss_legendre(k, 0.0, 1.0);
    T piece{};
    for (std::size_t j = 0; j < k; ++j) {
      const double s = q.nodes[j];
      const double theta = lo + 0.5 * len * (1.0 - std::cos(kPi * s));
      const double jac = 0.5 * len * kPi * std::sin(kPi * s);
      piece += g(theta) * (q.weights[j] * jac);
    }
    total += piece;
  }
  return total;
}

}  // namespace coulomb::detail
