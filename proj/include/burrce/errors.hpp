#ifndef BURRCE_ERRORS_HPP
#define BURRCE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace burrce {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Density requested at x = 0 where it is unbounded (shape c < 1).
class SingularDensityError : public Error {
 public:
  using Error::Error;
};

/// Requested moment does not exist for the given parameters.
class MomentUndefinedError : public Error {
 public:
  using Error::Error;
};

/// Estimation requires at least one exact (uncensored) failure time.
class NoExactObservationsError : public Error {
 public:
  using Error::Error;
};

/// Every candidate in a population produced a non-finite objective.
class AllInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The profile score equation has no root in the search bracket.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// A simulation cell would generate no exact observations.
class DegenerateSpecError : public Error {
 public:
  using Error::Error;
};

/// A statistic was requested on an empty sample.
class EmptySampleError : public Error {
 public:
  using Error::Error;
};

/// Too few observations for a meaningful two-parameter fit.
class SampleTooSmallError : public Error {
 public:
  using Error::Error;
};

/// Unknown serialization format name.
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

/// A benchmark spec document violates the schema. Carries the JSON
/// pointer of the offending field.
class SpecValidationError : public Error {
 public:
  SpecValidationError(const std::string& pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace burrce

#endif  // BURRCE_ERRORS_HPP
