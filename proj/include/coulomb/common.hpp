#pragma once

#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coulomb {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy. Everything derives from std::runtime_error or
// std::invalid_argument so callers can catch broadly.

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, std::size_t max_stable_degree)
      : std::runtime_error(what), max_stable_degree_(max_stable_degree) {}
  std::size_t max_stable_degree() const noexcept { return max_stable_degree_; }

 private:
  std::size_t max_stable_degree_;
};

}  // namespace coulomb
