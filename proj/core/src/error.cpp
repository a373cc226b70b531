#include "meshsched/error.hpp"

namespace meshsched {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ConnectivityFailure: return "ConnectivityFailure";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::InvalidDag: return "InvalidDag";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::PredecessorUnplaced: return "PredecessorUnplaced";
    case ErrorCode::OwnerViolation: return "OwnerViolation";
    case ErrorCode::InvalidAssignment: return "InvalidAssignment";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace meshsched
