#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exset {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// Raised when a smooth-field quantity is requested from a covariance
/// family that is not twice differentiable at the origin.
class NoSpectralMoment : public Error {
 public:
  NoSpectralMoment() : Error("no second spectral moment") {}
};

class EmbeddingFailure : public Error {
 public:
  EmbeddingFailure(const std::string& what, double residual_mass)
      : Error(what), residual_mass_(residual_mass) {}
  /// Negative spectral mass relative to the positive mass at the last attempt.
  double residual_mass() const noexcept { return residual_mass_; }

 private:
  double residual_mass_;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_(best_estimate), err_(error_estimate) {}
  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

class GridFormatError : public Error {
 public:
  GridFormatError(const std::string& what, std::size_t offset)
      : Error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Covariance matrix that cannot be inverted reliably, or an estimator
/// column with no variation.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

}  // namespace exset
