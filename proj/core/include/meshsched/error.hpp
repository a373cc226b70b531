#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meshsched {

enum class ErrorCode {
  InvalidConfig,
  ConnectivityFailure,
  Unreachable,
  InvalidDag,
  CycleDetected,
  PredecessorUnplaced,
  OwnerViolation,
  InvalidAssignment,
  BudgetExceeded,
  EmptyInput,
  Parse,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; code() identifies the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace meshsched
