#pragma once

// Orthonormal bases of Pol_n (weighted polynomials p e^{-nQ/2}, deg p < n),
// the reproducing kernel K_n, rescaled kernels and Berezin kernels.

#include <memory>
#include <vector>

#include "coulomb/common.hpp"
#include "coulomb/equilibrium.hpp"
#include "coulomb/potentials.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb {

struct BasisOptions {
  /// radial path: Gauss-Legendre panels per unit of sqrt(n) r (at least 64)
  double panels_per_scale = 4.0;
  std::size_t order = 16;
  /// log-integrand drop defining the radial cut-off
  double tail_drop = 70.0;
  /// general path: Gauss-Legendre nodes per axis and margin in units of 1/sqrt(n)
  std::size_t grid_nodes = 200;
  double margin = 7.0;
  /// general path: stop when the new Arnoldi vector loses this much norm
  double breakdown = 1e-10;
};

/// Orthonormal basis phi_0 .. phi_{n-1} of Pol_n in L^2(dA).
///
/// Radial potentials: phi_k = z^k e^{-nQ/2} / sqrt(h_k) with
/// h_k = int r^{2k} e^{-n q(r)} 2r dr. Other potentials: Arnoldi
/// orthogonalization of 1, z, z^2, ... on a Gauss-Legendre grid; the Hessenberg
/// recurrence then evaluates the basis anywhere.
class WeightedBasis {
 public:
  static WeightedBasis build(const Potential& pot, std::size_t n, const BasisOptions& opt = {});
  /// Arnoldi path on a caller-supplied grid, for any potential.
  static WeightedBasis build_on_grid(const Potential& pot, std::size_t n, const Grid2D& grid,
                                     double breakdown = 1e-10);

  std::size_t n() const noexcept { return n_; }
  bool radial() const noexcept { return radial_; }
  const Potential& potential() const noexcept { return pot_; }
  /// radial path: log h_k
  const std::vector<double>& log_norms() const noexcept { return log_h_; }
  /// cut-off radius of the radial integrals, or the half-diagonal of the grid
  double reach() const noexcept { return reach_; }
  /// grid on which orthonormality holds (general path) or a plane grid that
  /// integrates products of basis elements (radial path)
  const Grid2D& grid() const noexcept { return grid_; }

  /// phi_k(z) for all k.
  void eval(Complex z, std::vector<Complex>& phi) const;
  /// phi_k(z) and the weighted derivative p_k'(z) e^{-nQ(z)/2}.
  void eval_with_derivative(Complex z, std::vector<Complex>& phi, std::vector<Complex>& dphi) const;

  /// K_n(z, w) = sum_k phi_k(z) conj(phi_k(w)), summed in the log domain on
  /// the radial path.
  Complex kernel(Complex z, Complex w) const;
  /// K_n(z, z)
  double one_point(Complex z) const;

 private:
  WeightedBasis(const Potential& pot) : pot_(pot) {}

  Potential pot_;
  std::size_t n_ = 0;
  bool radial_ = true;
  double reach_ = 0.0;
  std::vector<double> log_h_;
  // general path: Hessenberg coefficients H(j, k), column-major (n+1) x n
  std::vector<double> hess_re_, hess_im_;
  double q0_ = 1.0;
  Grid2D grid_;
};

/// Basis plus evaluation helpers; cheap to copy.
class KernelModel {
 public:
  explicit KernelModel(std::shared_ptr<const WeightedBasis> basis) : basis_(std::move(basis)) {}
  KernelModel(const Potential& pot, std::size_t n, const BasisOptions& opt = {})
      : basis_(std::make_shared<const WeightedBasis>(WeightedBasis::build(pot, n, opt))) {}

  const WeightedBasis& basis() const noexcept { return *basis_; }
  std::size_t n() const noexcept { return basis_->n(); }

 private:
  std::shared_ptr<const WeightedBasis> basis_;
};

Complex kernel_eval(const KernelModel& km, Complex z, Complex w);
double one_point(const KernelModel& km, Complex z);

/// z = e^{-i theta} s (zeta - p), s = sqrt(n Laplacian Q(p)), theta the
/// outer normal direction at the boundary point nearest to p.
struct RescaleFrame {
  Complex p;
  double theta = 0.0;
  double scale = 1.0;

  Complex forward(Complex zeta) const { return std::polar(scale, -theta) * (zeta - p); }
  Complex inverse(Complex z) const { return p + std::polar(1.0 / scale, theta) * z; }
};

RescaleFrame rescale_frame(const Potential& pot, const Droplet& droplet, Complex p, std::size_t n);

/// R_n(z) = K_n(zeta, zeta) / (n Laplacian Q(p)).
double rescaled_one_point(const KernelModel& km, const RescaleFrame& f, Complex z);
Complex rescaled_kernel(const KernelModel& km, const RescaleFrame& f, Complex z, Complex w);
/// B_n(z, w) = |K_n(z, w)|^2 / R_n(z); throws DomainError if R_n(z) = 0.
double berezin(const KernelModel& km, const RescaleFrame& f, Complex z, Complex w);

/// int B_n(z, w) dA(w) over the model's plane grid (rescaled measure).
double berezin_mass(const KernelModel& km, const RescaleFrame& f, Complex z);

/// int K_n(z, w) K_n(w, z) dA(w) over the plane grid; equals K_n(z, z).
Complex reproducing_integral(const KernelModel& km, Complex z);

/// Gram matrix of the basis on an arbitrary grid, returned as max |G - I|.
double gram_defect(const WeightedBasis& b, const Grid2D& grid);

}  // namespace coulomb
