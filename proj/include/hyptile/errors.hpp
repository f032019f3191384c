#ifndef HYPTILE_ERRORS_HPP
#define HYPTILE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hyptile {

/// Invalid input outside an operation's domain (y <= 0, off-simplex point, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sequence position or level needs more construction steps than allowed.
class CapError : public std::runtime_error {
 public:
  CapError(const std::string& what, std::int64_t position, int first_undefined_step)
      : std::runtime_error(what), position_(position), step_(first_undefined_step) {}

  std::int64_t position() const { return position_; }
  int first_undefined_step() const { return step_; }

 private:
  std::int64_t position_;
  int step_;
};

/// A word, window, enumeration or product would exceed its size budget.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A model is malformed, or an internal model invariant was violated.
class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class AlignmentError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedScheme : public ModelError {
 public:
  using ModelError::ModelError;
};

class DegeneracyError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Quadrature or other numerical procedure did not reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace hyptile

#endif  // HYPTILE_ERRORS_HPP
