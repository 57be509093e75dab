#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morse {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Arguments violate a precondition (dimension mismatch, bad parameter).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Every kernel weight underflowed; the query is too far from the data.
class NoMass : public Error {
public:
  using Error::Error;
};

/// The two naive tangent edges cancel (hairpin node).
class DegenerateTangent : public Error {
public:
  using Error::Error;
};

/// A geometric construction could not be carried out.
class ConstructionError : public Error {
public:
  using Error::Error;
};

/// A cell set is not closed under taking faces.
class InvalidComplex : public Error {
public:
  using Error::Error;
};

/// A search stage produced nothing usable.
class EmptyResult : public Error {
public:
  using Error::Error;
};

/// Every attempt of an iterative search failed to converge.
class NoConvergence : public EmptyResult {
public:
  using EmptyResult::EmptyResult;
};

/// Malformed text input. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace morse
