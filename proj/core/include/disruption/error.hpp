#pragma once

#include <stdexcept>
#include <string>

namespace disruption {

/// Error categories surfaced by the library. The CLI maps these onto the
/// `code` field of its machine-readable error object.
enum class ErrorCode {
  InvalidArgument,
  EmptyGraph,
  InvalidRecord,
  PlanMismatch,
  Format,
  Io,
  Convergence,
  TooLarge,
  Infeasible,
  Aggregation,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace disruption
