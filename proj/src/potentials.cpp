#include "coulomb/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coulomb {

Potential Potential::ginibre() { return Potential(PotentialKind::Ginibre, 1.0, 0.0); }

Potential Potential::mittag_leffler(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("mittag_leffler: exponent p must satisfy p >= 1");
  }
  return Potential(PotentialKind::MittagLeffler, p, 0.0);
}

Potential Potential::ellipse(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw std::invalid_argument("ellipse: parameter t must lie in (0, 1)");
  }
  return Potential(PotentialKind::Ellipse, 1.0, t);
}

Potential Potential::custom(CustomPotential spec) {
  if (!spec.value) throw std::invalid_argument("custom potential needs a value function");
  if (!(spec.fd_step > 0.0)) throw std::invalid_argument("custom potential: fd_step must be > 0");
  Potential pot(PotentialKind::Custom, 1.0, 0.0);
  pot.custom_ = std::make_shared<const CustomPotential>(std::move(spec));
  return pot;
}

bool Potential::radial() const noexcept {
  switch (kind_) {
    case PotentialKind::Ginibre:
    case PotentialKind::MittagLeffler:
      return true;
    case PotentialKind::Ellipse:
      return false;
    case PotentialKind::Custom:
      return custom_->radial;
  }
  return false;
}

std::string Potential::name() const {
  std::ostringstream os;
  switch (kind_) {
    case PotentialKind::Ginibre:
      return "ginibre";
    case PotentialKind::MittagLeffler:
      os << "mittag_leffler(p=" << p_ << ")";
      return os.str();
    case PotentialKind::Ellipse:
      os << "ellipse(t=" << t_ << ")";
      return os.str();
    case PotentialKind::Custom:
      return custom_->name;
  }
  return "unknown";
}

bool Potential::in_domain(Complex z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  if (kind_ == PotentialKind::Custom && custom_->in_domain) return custom_->in_domain(z);
  return true;
}

void Potential::require_domain(Complex z) const {
  if (!in_domain(z)) {
    std::ostringstream os;
    os << name() << ": point " << z << " is outside the evaluation domain";
    throw DomainError(os.str());
  }
}

double Potential::operator()(Complex z) const {
  require_domain(z);
  switch (kind_) {
    case PotentialKind::Ginibre:
      return std::norm(z);
    case PotentialKind::MittagLeffler:
      return std::pow(std::norm(z), p_);
    case PotentialKind::Ellipse:
      return std::norm(z) - t_ * (z * z).real();
    case PotentialKind::Custom:
      return custom_->value(z);
  }
  return 0.0;
}

Complex Potential::grad(Complex z) const {
  require_domain(z);
  switch (kind_) {
    case PotentialKind::Ginibre:
      return 2.0 * z;
    case PotentialKind::MittagLeffler: {
      const double r2 = std::norm(z);
      if (r2 == 0.0) return 0.0;
      return 2.0 * p_ * std::pow(r2, p_ - 1.0) * z;
    }
    case PotentialKind::Ellipse:
      return {2.0 * (1.0 - t_) * z.real(), 2.0 * (1.0 + t_) * z.imag()};
    case PotentialKind::Custom: {
      if (custom_->gradient) return custom_->gradient(z);
      const double h = custom_->fd_step;
      const auto& q = custom_->value;
      const double gx = (q(z + h) - q(z - h)) / (2.0 * h);
      const double gy = (q(z + Complex(0, h)) - q(z - Complex(0, h))) / (2.0 * h);
      return {gx, gy};
    }
  }
  return 0.0;
}

double Potential::laplacian(Complex z) const {
  require_domain(z);
  switch (kind_) {
    case PotentialKind::Ginibre:
    case PotentialKind::Ellipse:
      return 1.0;
    case PotentialKind::MittagLeffler:
      if (p_ == 1.0) return 1.0;
      return p_ * p_ * std::pow(std::norm(z), p_ - 1.0);
    case PotentialKind::Custom: {
      if (custom_->laplacian) return custom_->laplacian(z);
      const double h = custom_->fd_step;
      const auto& q = custom_->value;
      const double c = q(z);
      const double lap = q(z + h) + q(z - h) + q(z + Complex(0, h)) + q(z - Complex(0, h)) - 4.0 * c;
      return 0.25 * lap / (h * h);
    }
  }
  return 0.0;
}

double Potential::radial_flux(double r) const {
  switch (kind_) {
    case PotentialKind::Ginibre:
      return 2.0 * r * r;
    case PotentialKind::MittagLeffler:
      return 2.0 * p_ * std::pow(r, 2.0 * p_);
    default:
      return r * grad(Complex(r, 0.0)).real();
  }
}

double eval_potential(const Potential& pot, Complex z) { return pot(z); }
Complex grad(const Potential& pot, Complex z) { return pot.grad(z); }
double laplacian(const Potential& pot, Complex z) { return pot.laplacian(z); }

GrowthReport growth_check(const Potential& pot, const std::vector<double>& radii, double margin,
                          std::size_t angles) {
  if (radii.empty()) throw std::invalid_argument("growth_check: no radii given");
  if (angles == 0) throw std::invalid_argument("growth_check: need at least one angle");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 2.0)) throw std::invalid_argument("growth_check: radii must be >= 2");
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw std::invalid_argument("growth_check: radii must be increasing");
    }
  }
  GrowthReport report;
  report.radii = radii;
  report.margin = margin;
  for (double r : radii) {
    double lo = kInf;
    for (std::size_t j = 0; j < angles; ++j) {
      const Complex z = std::polar(r, 2.0 * kPi * static_cast<double>(j) / angles);
      lo = std::min(lo, pot(z) / std::log(r * r));
    }
    report.min_ratio.push_back(lo);
  }
  report.pass = report.min_ratio.back() > 1.0 + margin;
  return report;
}

}  // namespace coulomb
