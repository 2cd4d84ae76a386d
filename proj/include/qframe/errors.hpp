#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qframe {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed expression text. `position` is the 0-based byte offset into the
// expression where the problem was detected.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::string name, std::size_t position)
      : ParseError("unknown identifier '" + name + "'", position),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Evaluation left the domain of a function (log on the branch cut origin,
// division by zero, non-finite result). `component` is the quaternion unit
// index (0..3) of the offending expression, or -1 when not attributable.
class DomainError : public Error {
 public:
  DomainError(const std::string& message, int component = -1)
      : Error(component >= 0 ? message + " (component " +
                                   std::to_string(component) + ")"
                             : message),
        component_(component) {}

  int component() const noexcept { return component_; }

 private:
  int component_;
};

// Raised when a biquaternion zero divisor is inverted.
class ZeroDivisorError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

// A basis element left (C⊗H)⁻. `index` names the offending s_μ.
class BasisError : public Error {
 public:
  BasisError(const std::string& message, int index)
      : Error(message), index_(index) {}

  int index() const noexcept { return index_; }

 private:
  int index_;
};

class RealnessError : public Error {
 public:
  using Error::Error;
};

class RankMismatchError : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class NonUnitTransformError : public Error {
 public:
  using Error::Error;
};

class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

}  // namespace qframe
