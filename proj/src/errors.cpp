#include "subscan/errors.hpp"

namespace subscan {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kCorruption: return "corruption error";
    case ErrorKind::kVersion: return "version error";
    case ErrorKind::kRefusal: return "refusal";
    case ErrorKind::kIo: return "I/O error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace subscan
