#pragma once

#include <stdexcept>
#include <string>

namespace bvlab {

// Error taxonomy used across the library. Callers that violate a documented
// precondition get one of these; internal logic errors stay as asserts.

struct InvalidArgument : std::invalid_argument {
  explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

struct Unsupported : std::runtime_error {
  explicit Unsupported(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResolutionInsufficient : std::runtime_error {
  explicit ResolutionInsufficient(const std::string& msg) : std::runtime_error(msg) {}
};

struct BoundaryContact : std::runtime_error {
  explicit BoundaryContact(const std::string& msg) : std::runtime_error(msg) {}
};

struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bvlab
