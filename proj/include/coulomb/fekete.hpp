#pragma once

// Discrete logarithmic energy H_n, its gradient, a multi-start L-BFGS solver
// for Fekete configurations, separation metrics and a Metropolis sampler for
// the Boltzmann-Gibbs law exp(-beta H_n).

#include <cstdint>
#include <vector>

#include "coulomb/common.hpp"
#include "coulomb/equilibrium.hpp"
#include "coulomb/potentials.hpp"

namespace coulomb {

struct Configuration {
  std::vector<Complex> points;

  std::size_t n() const noexcept { return points.size(); }
};

struct EnergyValue {
  double value = 0.0;
  bool collision = false;
};

/// Pairs closer than this count as a collision.
inline constexpr double kCollisionDistance = 1e-12;

/// H_n = sum over ordered pairs of log 1/|z_j - z_k| + n sum Q(z_j).
/// Coincident points give +inf with the collision flag set.
EnergyValue energy(const Potential& pot, const Configuration& cfg);

/// Per-point planar gradient of H_n. Throws CollisionError on coincident points.
std::vector<Complex> energy_gradient(const Potential& pot, const Configuration& cfg);

/// max_j |grad_j H_n|
double max_gradient_norm(const std::vector<Complex>& g);

struct SolverConfig {
  std::size_t max_iterations = 5000;
  /// Converged when max_j |grad_j| <= tolerance * n.
  double tolerance = 1e-7;
  std::size_t restarts = 4;
  std::size_t memory = 8;
  double armijo = 1e-4;
  double backtrack = 0.5;
  std::size_t max_backtracks = 60;
  std::uint64_t seed = 1;
};

struct SolverReport {
  double energy = 0.0;
  std::size_t iterations = 0;
  double max_gradient = 0.0;
  std::size_t best_restart = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  /// energies of all restarts, by restart index
  std::vector<double> restart_energies;
  /// accepted-step energies of the best restart
  std::vector<double> energy_trace;
};

struct FeketeResult {
  Configuration config;
  SolverReport report;
};

/// Draws n points from the equilibrium density on the droplet by rejection.
Configuration sample_equilibrium(const EquilibriumMeasure& mu, std::size_t n, std::uint64_t seed);

/// Local L-BFGS descent from a given start.
FeketeResult descend(const Potential& pot, Configuration start, const SolverConfig& sc);

/// Best of `restarts` descents, each started from an independent draw of the
/// equilibrium measure. Restarts run in parallel; the winner is the lowest
/// energy, ties to the lower restart index.
FeketeResult solve_fekete(const Potential& pot, std::size_t n, const SolverConfig& sc,
                          const Droplet& droplet);

struct Separation {
  /// min_j sqrt(n Laplacian Q(z_j)) d_n(z_j)
  double delta = 0.0;
  /// d_n(z_j) = min_{k != j} |z_k - z_j|
  std::vector<double> nearest;
  std::size_t argmin = 0;
};

Separation separation(const Potential& pot, const Configuration& cfg);

struct BinDiscrepancy {
  std::vector<double> edges;     ///< level edges, 0 .. 1
  std::vector<double> empirical; ///< (1/n) * count per bin
  std::vector<double> expected;  ///< sigma-mass per bin
  double max_discrepancy = 0.0;
};

/// Bins by droplet level (radial for disks, elliptical for ellipses); points
/// outside S land in the last bin.
BinDiscrepancy counting_vs_sigma(const Configuration& cfg, const EquilibriumMeasure& mu, std::size_t bins);

/// sigma-mass of {l0 <= level < l1}.
double level_band_mass(const EquilibriumMeasure& mu, double l0, double l1);

// ------------------------------------------------------------ sampler

/// Acceptance rule min(1, exp(-beta dH)) given a uniform draw u in [0, 1).
bool metropolis_accept(double beta_delta_h, double u);

struct MetropolisConfig {
  double beta = 1.0;
  std::size_t burn_in_sweeps = 200;
  std::size_t sweeps = 1000;
  /// initial proposal scale in units of 1/sqrt(n)
  double step = 0.5;
  double target_acceptance = 0.4;
  std::uint64_t seed = 1;
};

struct SampleResult {
  Configuration config;
  double acceptance_rate = 0.0;
  double step = 0.0;
  std::vector<Configuration> snapshots;
};

/// Single-site Gaussian proposals. The step is tuned during burn-in only;
/// after burn-in a snapshot is stored every `thin` sweeps (0 stores none).
SampleResult metropolis_sample(const Potential& pot, std::size_t n, const MetropolisConfig& mc,
                               std::size_t thin = 0);

/// Change in H_n when point j moves to w (positions elsewhere fixed).
double energy_delta(const Potential& pot, const Configuration& cfg, std::size_t j, Complex w);

}  // namespace coulomb
