#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ergodograph {

/// Base class of every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (graph, tower, circulation or prefix files).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  explicit ParseError(const std::string& message) : Error(message) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// An enumeration produced more items than the caller allowed.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t count)
      : Error(what + ": more than " + std::to_string(count) + " items (cap exceeded)"),
        count_(count) {}

  /// Number of items found before giving up.
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

/// Structural validation failure: bad graph, bad cover, bad tower.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class EndpointMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotInvariant : public Error {
 public:
  using Error::Error;
};

class NegativeWeight : public Error {
 public:
  using Error::Error;
};

class NotMeanZero : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class NonIntegralDecomposition : public Error {
 public:
  using Error::Error;
};

class MissingExpression : public Error {
 public:
  using Error::Error;
};

class InvalidSchedule : public Error {
 public:
  using Error::Error;
};

class UnroutableRequest : public Error {
 public:
  UnroutableRequest(const std::string& message, std::string vertex)
      : Error(message + " (at " + vertex + ")"), vertex_(std::move(vertex)) {}

  const std::string& vertex() const noexcept { return vertex_; }

 private:
  std::string vertex_;
};

/// A linear system that the theory guarantees to be solvable was not.
/// Always indicates a bug, never bad input.
class InfeasibleSystem : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ergodograph
