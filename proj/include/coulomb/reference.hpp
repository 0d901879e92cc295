#pragma once

// Straightforward serial versions of the hot loops. They define the expected
// values for the parallel implementations in tests and benchmarks.

#include <functional>
#include <vector>

#include "coulomb/fekete.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb::reference {

double energy(const Potential& pot, const Configuration& cfg);
std::vector<Complex> energy_gradient(const Potential& pot, const Configuration& cfg);
double integrate2d_real(const Grid2D& grid, const std::function<double(Complex)>& f);

}  // namespace coulomb::reference
