#ifndef FRF_ERRORS_HPP_
#define FRF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace frf {

// Bad arguments: non-finite samples, mismatched grids, out-of-range parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside an operator's domain (e.g. non-mean-zero field handed to A^-1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A diffeomorphism whose Jacobian dropped below the positivity floor.
class DegenerateDiffeo : public std::runtime_error {
 public:
  DegenerateDiffeo(const std::string& what, double min_jacobian)
      : std::runtime_error(what), min_jacobian_(min_jacobian) {}
  double min_jacobian() const noexcept { return min_jacobian_; }

 private:
  double min_jacobian_;
};

// Loss of a classical solution (flow Jacobian collapse, blowup) at a known time.
class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace frf

#endif  // FRF_ERRORS_HPP_
