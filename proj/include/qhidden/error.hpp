#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qhidden {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two objects that must agree in size do not (assignment vs formula, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input is syntactically malformed. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input is well formed but violates a semantic invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is not meaningful for these parameters.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// A root or threshold search failed to bracket its target.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration left the admissible state space.
class IntegratorError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhidden
