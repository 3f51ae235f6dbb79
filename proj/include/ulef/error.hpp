#pragma once

#include <stdexcept>
#include <string>

namespace ulef {

/// Category of a failure; each maps onto one CLI exit code.
enum class ErrorKind {
  Input,        // malformed document, unknown symbol, invalid model
  Validation,   // a checked mathematical precondition does not hold
  Unsupported,  // operation gated off for this group kind / model
  Resource,     // a budget (radius, capacity, subdivision, table) was exceeded
  Internal      // invariant breach; always a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// Raised for a non-orientable quotient where an orientation is required.
class OrientationError : public ValidationError {
 public:
  explicit OrientationError(const std::string& what) : ValidationError(what) {}
};

/// Raised when a map or field fails (strong) tameness.
class TamenessError : public ValidationError {
 public:
  explicit TamenessError(const std::string& what) : ValidationError(what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(ErrorKind::Unsupported, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ErrorKind::Resource, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::Internal, what) {}
};

/// 0 success, 1 validation/input, 2 resource/budget, 3 internal.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Resource: return 2;
    case ErrorKind::Internal: return 3;
    default: return 1;
  }
}

}  // namespace ulef
