#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curveq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is a byte offset into the input.
class ParseError : public Error {
 public:
  enum class Kind { syntax, unknown_identifier };

  ParseError(Kind kind, std::size_t offset, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Expression evaluated outside its domain (log of non-positive, division by
/// zero, ...). `offset()` locates the offending node in the source text.
class EvaluationError : public Error {
 public:
  EvaluationError(std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// |a'(t)| too small for an arc-length parametrization.
class RegularityError : public Error {
 public:
  RegularityError(double parameter, const std::string& message);

  double parameter() const noexcept { return parameter_; }

 private:
  double parameter_;
};

/// Curvature below kappa_min where a Frenet normal is required.
class CurvatureError : public Error {
 public:
  CurvatureError(double arc_length, const std::string& message);

  double arc_length() const noexcept { return arc_length_; }

 private:
  double arc_length_;
};

/// Arc length outside [0, L], or an inconsistent curve definition.
class CurveDomainError : public Error {
 public:
  using Error::Error;
};

/// Tube point with 1 - kappa*q2 <= 0.
class TubeValidityError : public Error {
 public:
  using Error::Error;
};

/// Grid inconsistent with the curve (e.g. periodic grid on an open curve).
class GridError : public Error {
 public:
  using Error::Error;
};

/// Operator construction preconditions violated.
class OperatorError : public Error {
 public:
  using Error::Error;
};

/// Eigen-solver failure; carries the worst residual seen.
class SolverError : public Error {
 public:
  SolverError(double residual, const std::string& message);

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace curveq
