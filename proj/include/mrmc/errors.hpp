#pragma once

#include <stdexcept>
#include <string>

namespace mrmc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A topology or problem invariant was violated. The message names the
/// violated invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (topology files, CLI values).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A commodity destination is unreachable from its source.
class NoPathError : public Error {
 public:
  using Error::Error;
};

/// An enumeration safety cap was exceeded.
class EnumerationLimitError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside the LP solver (iteration cap, singular basis).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrmc
