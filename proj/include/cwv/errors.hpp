#pragma once

#include <stdexcept>
#include <string>

namespace cwv {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands have incompatible or invalid dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A matrix required to be Hermitian is not, beyond tolerance.
class HermiticityError : public Error {
 public:
  using Error::Error;
};

// A domain-type invariant failed (normalization, positivity, schema, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Weak value requested for an outcome with (near-)zero probability.
class UndefinedWeakValue : public Error {
 public:
  using Error::Error;
};

// An operation requiring commuting operands received non-commuting ones.
class CommutationError : public Error {
 public:
  using Error::Error;
};

// Input text could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An output sink could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cwv
