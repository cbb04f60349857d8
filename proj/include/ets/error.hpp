#pragma once

#include <stdexcept>
#include <string>

namespace ets {

/// Broad failure category; the CLI maps each one to an exit code.
/// `internal` marks a broken internal invariant and exits like a verification failure.
enum class ErrorKind { verification, input, ceiling, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed or out-of-domain input (bad graph6, non-bijection, ...).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class MalformedGraph6 : public InputError {
 public:
  using InputError::InputError;
};

class NotCubic : public InputError {
 public:
  using InputError::InputError;
};

class Disconnected : public InputError {
 public:
  using InputError::InputError;
};

/// Violated simplicial-surface or cycle-double-cover condition.
class SurfaceError : public InputError {
 public:
  using InputError::InputError;
};

/// A configured resource ceiling would be exceeded; the work is refused.
class CeilingError : public Error {
 public:
  explicit CeilingError(const std::string& what) : Error(ErrorKind::ceiling, what) {}
};

/// A computed result contradicts a structural invariant.
class VerificationError : public Error {
 public:
  explicit VerificationError(const std::string& what)
      : Error(ErrorKind::verification, what) {}
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::verification: return 1;
    case ErrorKind::input: return 2;
    case ErrorKind::ceiling: return 3;
    case ErrorKind::internal: return 1;
  }
  return 1;
}

}  // namespace ets
