#pragma once

#include <stdexcept>
#include <string>

namespace subscan {

/// Failure category. The CLI maps kIo to exit code 1 and everything else to 2.
enum class ErrorKind {
  kValidation,
  kDimension,
  kDomain,
  kCorruption,
  kVersion,
  kRefusal,
  kIo,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m) : Error(ErrorKind::kValidation, m) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& m) : Error(ErrorKind::kDimension, m) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorKind::kDomain, m) {}
};

class CorruptionError : public Error {
 public:
  explicit CorruptionError(const std::string& m) : Error(ErrorKind::kCorruption, m) {}
};

class VersionError : public Error {
 public:
  explicit VersionError(const std::string& m) : Error(ErrorKind::kVersion, m) {}
};

// Raised when an exhaustive routine is asked to run on an input too large to enumerate.
class RefusalError : public Error {
 public:
  explicit RefusalError(const std::string& m) : Error(ErrorKind::kRefusal, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};

}  // namespace subscan
