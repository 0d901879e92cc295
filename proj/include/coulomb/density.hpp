#pragma once

// Counting in shrinking disks, Beurling-Landau density tables, concentration
// operators on Pol_m, weighted Lagrange interpolation, Bernstein and
// maximum-principle diagnostics, interpolation / sampling certificates and a
// sampler-versus-kernel cross-check.

#include <cstdint>
#include <string>
#include <vector>

#include "coulomb/common.hpp"
#include "coulomb/equilibrium.hpp"
#include "coulomb/fekete.hpp"
#include "coulomb/kernels.hpp"
#include "coulomb/potentials.hpp"

namespace coulomb {

// ------------------------------------------------------------ moving points

enum class PlanRule { FixedPoint, BoundaryAnchored };
enum class Regime { Bulk, RegularBoundary, Unclassified };

std::string to_string(Regime r);

struct MovingPointPlan {
  PlanRule rule = PlanRule::FixedPoint;
  /// the fixed point, or the point whose nearest boundary point anchors the plan
  Complex point{0.0, 0.0};
  /// inward offset in units of 1/sqrt(n Laplacian Q) (anchored plans)
  double tau = 0.0;
  std::vector<std::size_t> ns;
  std::string label;

  static MovingPointPlan fixed(Complex p, std::vector<std::size_t> ns);
  static MovingPointPlan anchored(Complex p, double tau, std::vector<std::size_t> ns);
};

/// p_n for one n of the plan.
Complex plan_point(const MovingPointPlan& plan, const Potential& pot, const Droplet& droplet, std::size_t n);

/// Bulk when min_n sqrt(n Laplacian Q(p_n)) delta(p_n) >= threshold, regular
/// boundary when the max is <= threshold, otherwise unclassified.
Regime classify_regime(const MovingPointPlan& plan, const Droplet& droplet, const Potential& pot,
                       double threshold = 5.0);

// ------------------------------------------------------------ counting

/// #{z_j : |z_j - p| < Lambda / sqrt(n Laplacian Q(p))}
std::size_t count_in_disk(const Configuration& cfg, const Potential& pot, Complex p, std::size_t n,
                          double Lambda);

struct DensityCell {
  std::size_t n = 0;
  double lambda = 0.0;
  std::size_t count = 0;
  double ratio = 0.0;  ///< count / lambda^2
};

struct DensityEstimate {
  std::string plan;
  std::vector<DensityCell> table;
  /// max / min of the ratio over the largest two n and largest three Lambda
  double d_plus = 0.0;
  double d_minus = 0.0;
};

/// family[i] is the configuration for plan.ns[i].
DensityEstimate bl_density(const std::vector<Configuration>& family, const MovingPointPlan& plan,
                           const Potential& pot, const Droplet& droplet, std::vector<double> lambdas);

struct StripReport {
  std::size_t count = 0;  ///< points in the disk and in the strip
  double ratio = 0.0;     ///< count / Lambda^2
  double constant = 0.0;  ///< count / (T Lambda)
};

/// Counts points of `cfg` in D(p, Lambda/s) within distance T/s of the line
/// through p with the given direction (s = sqrt(n Laplacian Q(p))).
StripReport strip_count_bound(const Configuration& cfg, const Potential& pot, Complex p, std::size_t n,
                              double Lambda, double T, Complex direction = {1.0, 0.0});

/// Points at rescaled spacing 1 on the segment of length 2 Lambda through p,
/// offset by half a spacing from p.
Configuration line_configuration(const Potential& pot, Complex p, std::size_t n, double Lambda,
                                 Complex direction = {1.0, 0.0});

// ------------------------------------------------------------ concentration

struct ConcentrationQuadrature {
  std::size_t radial_panels = 8;
  std::size_t order = 16;
  /// extra angular nodes per unit of n |p| r_A (oscillation of the weight)
  double angular_factor = 4.0;
};

struct ConcentrationSpectrum {
  std::vector<double> eigenvalues;  ///< decreasing
  double trace = 0.0;               ///< sum |B_ij|^2 = Tr T
  double trace_sq = 0.0;            ///< ||M||_F^2 = Tr T^2
  double trace_direct = 0.0;        ///< int_A R_m dA on a refined grid
  std::size_t n = 0;
  double rho = 1.0;
  double lambda = 0.0;
  Complex p;
  std::size_t m = 0;  ///< dimension round(n rho)
};

/// Spectrum of f -> P_m[1_A f] on Pol_m, A = D(p, Lambda / sqrt(n Laplacian Q(p))),
/// computed from a QR factorization of the sampled basis on a polar grid of A.
/// `basis.n()` must equal round(n rho).
ConcentrationSpectrum concentration_spectrum(const WeightedBasis& basis, const Potential& pot, Complex p,
                                             std::size_t n, double rho, double Lambda,
                                             const ConcentrationQuadrature& q = {});

/// Tr(T - T^2) / Lambda^2
double trace_defect(const ConcentrationSpectrum& s);

struct CountingCheck {
  double gamma = 0.0;
  std::size_t above = 0;       ///< #{lambda_j > gamma}
  double lower = 0.0;          ///< Tr T - Tr(T - T^2) / (1 - gamma)
  std::size_t at_least = 0;    ///< #{lambda_j >= gamma}
  double upper = 0.0;          ///< Tr T + Tr(T - T^2) / gamma
  bool holds = false;
};

std::vector<CountingCheck> counting_inequalities(const ConcentrationSpectrum& s,
                                                 const std::vector<double>& gammas = {0.1, 0.25, 0.5, 0.75, 0.9});

/// Eigenvalues inside [-tol, 1 + tol] and ordered; see notes on rounding.
bool spectrum_in_unit_interval(const ConcentrationSpectrum& s, double tol = 1e-12);

// ------------------------------------------------------------ lagrange

/// l_j(z) = prod_{i != j} (z - z_i) / (z_j - z_i) e^{-n (Q(z) - Q(z_j)) / 2}
class LagrangeBasis {
 public:
  LagrangeBasis(const Potential& pot, const Configuration& cfg);

  std::size_t n() const noexcept { return nodes_.size(); }
  const std::vector<Complex>& nodes() const noexcept { return nodes_; }
  /// all l_j(z); O(n)
  void eval(Complex z, std::vector<Complex>& out) const;
  Complex eval(std::size_t j, Complex z) const;

 private:
  Potential pot_;
  std::vector<Complex> nodes_;
  std::vector<Complex> log_denom_;  ///< sum_{i != j} log(z_j - z_i)
  std::vector<double> q_;
};

struct LagrangeReport {
  double max_sup = 0.0;       ///< max_j sup_grid |l_j|
  std::size_t argmax = 0;
  double cardinality_error = 0.0;  ///< max_{j,k} |l_j(z_k) - delta_jk|
};

/// Sup over a dense grid of S, its boundary and the nodes (enough by the
/// maximum principle for weighted polynomials of degree < n).
LagrangeReport lagrange_report(const Potential& pot, const Droplet& droplet, const Configuration& cfg,
                               std::size_t nr = 60, std::size_t ntheta = 256);

// ------------------------------------------------------------ bernstein

struct BernsteinReport {
  /// max over f and over zeta in S of |grad |f|| / (sqrt(e n Laplacian Q) ||f||_inf)
  double max_ratio = 0.0;
  /// max relative difference between the analytic gradient and central differences
  double fd_agreement = 0.0;
  /// max over f of sup outside S / sup over S (maximum principle; <= 1)
  double max_principle_ratio = 0.0;
};

/// f = sum c_k phi_k with complex Gaussian coefficients; `samples` functions.
BernsteinReport bernstein_check(const Potential& pot, const WeightedBasis& basis, const Droplet& droplet,
                                std::size_t samples, std::uint64_t seed, bool constant_only = false);

// ------------------------------------------------------------ certificates

struct InterpolationCertificate {
  double constant = 0.0;           ///< max over trials of n ||f||^2 / sum |c_j|^2
  double interpolation_error = 0.0;  ///< max_j |f(z_j) - c_j| / max |c|
  double min_node_ratio = 0.0;     ///< min_j R_{m}(z_j) / m, m = round(eps n)
  std::size_t kernel_degree = 0;
};

/// rho = 1 + 2 eps; L_j = (K_m(z, z_j) / R_m(z_j))^2 l_j with m = round(eps n).
InterpolationCertificate interpolation_certificate(const Potential& pot, const Droplet& droplet,
                                                   const Configuration& cfg, double rho, std::size_t trials,
                                                   std::uint64_t seed);

struct MFamilyCertificate {
  double constant = 0.0;        ///< max over trials of int_{S_s}|f|^2 / ((1/n) sum |f(z_j)|^2)
  double converse = 0.0;        ///< max over trials of s^2 (1/n) sum |f(z_j)|^2 / int_{S_s}|f|^2
  double min_sample_norm = 0.0; ///< min over trials of (1/n) sum |f(z_j)|^2 / int_{S_s}|f|^2
  double separation = 0.0;      ///< sqrt(n) min_{j != k} |z_j - z_k|
};

/// f in Pol_m, m = round(rho n); S_s = S + D(0, s/sqrt n). Throws
/// ConfigurationError unless the points are 2s-separated.
MFamilyCertificate m_family_certificate(const Potential& pot, const Droplet& droplet, const Configuration& cfg,
                                        double rho, double s, std::size_t trials, std::uint64_t seed);

// ------------------------------------------------------------ sampler cross-check

struct HistogramBin {
  double r0 = 0.0, r1 = 0.0;
  double observed = 0.0;   ///< mean fraction of particles in the annulus
  double expected = 0.0;   ///< (1/n) int over the annulus of R_n
  double std_error = 0.0;  ///< batch-means standard error
  double z_score = 0.0;
};

struct HistogramCheck {
  std::vector<HistogramBin> bins;
  double max_z = 0.0;
  std::size_t snapshots = 0;
  double acceptance_rate = 0.0;
};

/// Radial histogram of beta = 1 Metropolis samples of a radial potential
/// against the one-point function of Pol_n.
HistogramCheck sampler_histogram(const Potential& pot, std::size_t n, const MetropolisConfig& mc,
                                 std::size_t bins, double rmax, std::size_t batches = 20);

}  // namespace coulomb
