#include "coulomb/special.hpp"

#include <array>
#include <cmath>

namespace coulomb {

namespace {

constexpr int kTerms = 40;

struct Weideman {
  double L;
  std::array<double, kTerms> coef;  // highest power first

  Weideman() {
    const int M = 2 * kTerms;
    const int M2 = 2 * M;
    L = std::sqrt(kTerms / std::sqrt(2.0));
    // samples at k = -M+1 .. M-1, stored in fft-shifted order
    std::array<double, 4 * kTerms> g{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double t = L * std::tan(0.5 * k * kPi / M);
      const double f = std::exp(-t * t) * (L * L + t * t);
      g[static_cast<std::size_t>(k >= 0 ? k : k + M2)] = f;
    }
    std::array<double, kTerms + 1> a{};
    for (int n = 1; n <= kTerms; ++n) {
      double s = 0.0;
      for (int m = 0; m < M2; ++m) s += g[static_cast<std::size_t>(m)] * std::cos(2.0 * kPi * m * n / M2);
      a[static_cast<std::size_t>(n)] = s / M2;
    }
    for (int n = 0; n < kTerms; ++n) coef[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(kTerms - n)];
  }

  Complex operator()(Complex z) const {
    const Complex iz(-z.imag(), z.real());
    const Complex den = L - iz;
    const Complex Z = (L + iz) / den;
    Complex p = 0.0;
    for (double c : coef) p = p * Z + c;
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(kPi)) / den;
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

}  // namespace

Complex faddeeva(Complex z) {
  if (z.imag() >= 0.0) return weideman()(z);
  return 2.0 * std::exp(-z * z) - weideman()(-z);
}

Complex erfc(Complex z) {
  if (z.real() < 0.0) return 2.0 - erfc(-z);
  // Re z >= 0, so iz lies in the closed upper half plane
  return std::exp(-z * z) * weideman()(Complex(-z.imag(), z.real()));
}

Complex plasma_F(Complex z) { return 0.5 * erfc(z / std::sqrt(2.0)); }

Complex log_plasma_F(Complex z) {
  if (z.real() >= 0.0) {
    // F(z) = exp(-z^2/2) w(iz/sqrt 2) / 2 with iz/sqrt 2 in the upper half plane
    const Complex s = z / std::sqrt(2.0);
    return std::log(0.5) - 0.5 * z * z + std::log(weideman()(Complex(-s.imag(), s.real())));
  }
  // F(z) = 1 - F(-z)
  const Complex lm = log_plasma_F(-z);
  if (lm.real() > 30.0) return lm + Complex(0.0, kPi) + std::log(1.0 - std::exp(-lm));
  return std::log(1.0 - std::exp(lm));
}

CheckedValue plasma_F_checked(Complex z) {
  return {plasma_F(z), std::abs(z.imag()) <= kPlasmaWindow};
}

double dawson_H(double t) { return 0.5 * faddeeva(Complex(t / std::sqrt(2.0), 0.0)).imag(); }

}  // namespace coulomb
