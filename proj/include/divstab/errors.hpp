#pragma once

#include <stdexcept>
#include <string>

namespace divstab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition failed (non-ample class, non-psef class,
/// reversed integration bounds, ...). The message names the invariant.
class DomainError : public Error {
 public:
  DomainError(const std::string& invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(invariant) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

/// Malformed input document or incomplete model data.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Model data is well-formed but insufficient for the request (missing
/// blowup multiplicities, empty curve list on a surface, ...).
class ConfigError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

/// Two independent routes to the same quantity disagreed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace divstab
