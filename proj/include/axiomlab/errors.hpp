#pragma once

#include <stdexcept>
#include <string>

namespace axiomlab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text or JSON. `kind()` distinguishes the failure classes
/// named by the file-format contract.
struct ParseError : Error {
  enum class Kind { MalformedRational, MalformedRanking, NotBistochastic, Syntax };
  ParseError(Kind k, const std::string& what) : Error(what), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Structurally valid input that violates a semantic precondition
/// (unknown agent/object, mismatched dimensions, j == j', ...).
struct InputError : Error {
  using Error::Error;
};

/// Query outside a mechanism's or checker's declared domain.
struct DomainError : Error {
  using Error::Error;
};

/// Instance too large for an exact-enumeration routine.
struct CapacityError : Error {
  using Error::Error;
};

}  // namespace axiomlab
