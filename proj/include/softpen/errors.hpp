#pragma once

#include <stdexcept>
#include <string>

namespace softpen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector or matrix had the wrong size for the problem it was used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A penalty schedule was asked for parameters outside its admissible range.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// Random instance generation could not produce a valid instance.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A problem description could not be parsed. `field` names the offending
/// entry (JSON pointer style) when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message),
        field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace softpen
