#pragma once

#include <stdexcept>
#include <string>

namespace satflux {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model or scheme parameter violates its documented constraint.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An evaluator was called outside its domain (non-finite input, |u| > c, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// g = Φ⁻¹ was asked for |r| >= c. Callers clamp explicitly if they want to.
class SaturationDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The boundary-layer equation for the initial datum has no root in (0, delta0].
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

class NoSteadyStateError : public Error {
 public:
  using Error::Error;
};

class DegenerateProfileError : public Error {
 public:
  using Error::Error;
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class UnrepresentableError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration. `where()` names the line and/or key.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string where = {})
      : Error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// v lost positivity during a dual step; the dual formulation is invalid past this time.
class PositivityLoss : public Error {
 public:
  PositivityLoss(double time, std::size_t cell)
      : Error("positivity loss at t=" + std::to_string(time) + " in cell " + std::to_string(cell)),
        time_(time),
        cell_(cell) {}
  double time() const noexcept { return time_; }
  std::size_t cell() const noexcept { return cell_; }

 private:
  double time_;
  std::size_t cell_;
};

/// The fronts crossed (σ₊ <= σ₋) during a front update.
class SupportCollapse : public Error {
 public:
  explicit SupportCollapse(double time)
      : Error("support collapsed at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace satflux
