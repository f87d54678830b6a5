#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lipasp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar argument lies outside the domain of a transform
/// (e.g. a grey level outside (0, M), a non-positive LIP factor).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a precondition (strict sanitation, NaN pixels,
/// mismatched grey-scale bounds, empty structuring function, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes are incompatible, e.g. a probe larger than the image.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated PGM / ASPF stream.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Data cannot be represented in the requested output format.
class EncodeError : public Error {
 public:
  using Error::Error;
};

/// The ratio and gradient forms of the distance map disagree beyond tolerance.
class EquivalenceError : public Error {
 public:
  EquivalenceError(const std::string& what, double discrepancy);
  double discrepancy() const noexcept { return discrepancy_; }

 private:
  double discrepancy_;
};

}  // namespace lipasp
