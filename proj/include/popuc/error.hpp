#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace popuc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed expressions, schema violations, measure data that
/// breaks an invariant. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation that could not be carried out: degenerate moment matrices,
/// non-convergent iterations, pole collisions. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ValidationError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnboundVariableError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonFiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotDifferentiableError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Toeplitz moment matrix lost positive definiteness (finite support exhausted).
class DegenerateMeasureError : public NumericalError {
 public:
  DegenerateMeasureError(const std::string& what, int degree)
      : NumericalError(what), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Evaluation point hits a pole of a predicate kernel.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MatchingError : public NumericalError {
 public:
  MatchingError(const std::string& what, double t) : NumericalError(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

}  // namespace popuc
