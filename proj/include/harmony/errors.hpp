#pragma once

#include <stdexcept>
#include <string>

namespace harmony {

/// Raised when an operation is called outside its domain (bad group order,
/// wrong congruence class, non-prime characteristic, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an object that must satisfy a structural property does not
/// (a stabilizer larger than expected, a non-resolvable input family, ...).
class VerificationError : public std::runtime_error {
 public:
  explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed serialized input.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace harmony
