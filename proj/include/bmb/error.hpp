#pragma once

#include <stdexcept>
#include <string>

namespace bmb {

enum class ErrorKind {
  NotPositiveDefinite,
  DimensionMismatch,
  UnknownVariable,
  EmptyQuery,
  QueryIsEverything,
  DuplicateName,
  InvalidDegreesOfFreedom,
  InvalidParameter,
  NonConvergence,
  EmptyInterval,
  ConstantVariable,
  InsufficientSamples,
  LagTooLarge,
  ConstantSeries,
  SeriesTooShort,
  SamplerFailure,
  Io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by Cholesky routines; carries the zero-based index of the first
// pivot that failed.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(std::size_t pivot, const std::string& what)
      : Error(ErrorKind::NotPositiveDefinite, what), pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace bmb
