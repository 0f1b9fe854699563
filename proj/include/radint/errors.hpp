#pragma once

#include <stdexcept>
#include <string>

namespace radint {

/// Input outside the domain of an operation (e outside [0,1), r <= 0, ...).
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// The node line is undefined for (near) equatorial orbits.
class degenerate_chart_error : public domain_error {
public:
  using domain_error::domain_error;
};

/// |4 - 5 s^2| fell inside the guard band around the critical inclination.
class critical_inclination_error : public domain_error {
public:
  using domain_error::domain_error;
};

/// A (family, order) combination that has no closed form in this library.
class unsupported_term_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A term table lookup for a field that was never registered.
class missing_term_error : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Iterative procedure that did not reach its tolerance.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Step-size underflow or a non-finite state during numerical integration.
class integration_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace radint
