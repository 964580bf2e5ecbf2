#pragma once

#include <stdexcept>
#include <string>

namespace srgnav {

/// Base class for all srgnav errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// No traversable path exists between the requested cells.
class NoPathError : public Error {
 public:
  using Error::Error;
};

/// Scene generation could not satisfy its constraints within the retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Matrix / model dimension mismatch.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to a domain operation (zero-norm vector, empty record
/// set, l_i <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// File parsing / format-version problems.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An artifact's embedded category-space hash does not match the manifest.
class HashMismatchError : public IoError {
 public:
  using IoError::IoError;
};

/// A pipeline stage was invoked before its inputs exist.
class DependencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace srgnav
