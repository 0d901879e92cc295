#pragma once

// Complex error-function family built on the Faddeeva function
// w(z) = exp(-z^2) erfc(-iz).

#include "coulomb/common.hpp"

namespace coulomb {

/// Faddeeva function, rational approximation in the upper half plane and the
/// reflection w(z) = 2 exp(-z^2) - w(-z) below it.
Complex faddeeva(Complex z);

Complex erfc(Complex z);

/// F(z) = erfc(z / sqrt 2) / 2, the Gaussian tail probability continued to C.
Complex plasma_F(Complex z);

/// Documented accuracy window for plasma_F: |Im z| <= 10.
inline constexpr double kPlasmaWindow = 10.0;

/// log F(z) (any branch); finite where F itself would overflow.
Complex log_plasma_F(Complex z);

struct CheckedValue {
  Complex value;
  /// false when the argument lies outside the accuracy window
  bool in_window = true;
};
CheckedValue plasma_F_checked(Complex z);

/// H(t) = (2 pi)^(-1/2) exp(-t^2/2) int_0^t exp(x^2/2) dx.
double dawson_H(double t);

}  // namespace coulomb
