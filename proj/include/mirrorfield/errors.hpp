#pragma once

#include <stdexcept>
#include <string>

namespace mirrorfield {

/// Base of every input-validation failure. The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// r^2 + t^2 + l^2 differs from one on some side.
class EnergyViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An amplitude (or other bounded parameter) lies outside its admissible range.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// 1 + r^2 - t^2 vanishes on some side, leaving the normalisation undefined.
class DegenerateTransparency : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Argument outside the domain of a rate function (negative distance, bad alignment).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Two successive quadrature refinement levels disagree beyond the tolerance.
class QuadratureBudgetExceeded : public std::runtime_error {
 public:
  QuadratureBudgetExceeded(const std::string& what, double fine, double coarse)
      : std::runtime_error(what), fine_(fine), coarse_(coarse) {}

  double fine() const noexcept { return fine_; }
  double coarse() const noexcept { return coarse_; }

 private:
  double fine_;
  double coarse_;
};

}  // namespace mirrorfield
