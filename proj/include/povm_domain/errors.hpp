#pragma once

#include <stdexcept>
#include <string>

namespace povm_domain {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is malformed or inconsistent (shapes, ranges, file content).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to produce a result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public InputError {
 public:
  using InputError::InputError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonFinite : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class InvalidState : public InputError {
 public:
  using InputError::InputError;
};

class AngleOutOfRange : public InputError {
 public:
  using InputError::InputError;
};

class OutsideBlochBall : public InputError {
 public:
  using InputError::InputError;
};

class BadRank : public InputError {
 public:
  using InputError::InputError;
};

class NotOrthonormal : public InputError {
 public:
  using InputError::InputError;
};

class TooFewPoints : public InputError {
 public:
  using InputError::InputError;
};

class WrongLength : public InputError {
 public:
  using InputError::InputError;
};

class InvalidCounts : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace povm_domain
