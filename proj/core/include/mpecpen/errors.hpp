#pragma once

#include <stdexcept>
#include <string>

namespace mpecpen {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnboundedBox : public Error {
 public:
  using Error::Error;
};

/// Malformed problem text. Carries the 1-based line and column of the fault.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed JSON that does not describe a valid problem. `field` is a
/// dotted path such as "objective.xx[1]".
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& msg);

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// The square-root penalty is not differentiable at r(z) = 0.
class AtKink : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class EmptySolutionSet : public Error {
 public:
  using Error::Error;
};

class NonUniqueSolution : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

class EmptyPolyhedron : public Error {
 public:
  using Error::Error;
};

}  // namespace mpecpen
