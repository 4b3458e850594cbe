#include "greenpod/error.hpp"

namespace greenpod {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidMatrix: return "invalid_matrix";
    case ErrorCode::kInvalidWeights: return "invalid_weights";
    case ErrorCode::kNoNodes: return "no_nodes";
    case ErrorCode::kNoFeasibleNodes: return "no_feasible_nodes";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kInvalidParams: return "invalid_params";
    case ErrorCode::kInvalidAssumptions: return "invalid_assumptions";
    case ErrorCode::kConfigError: return "config_error";
  }
  return "unknown";
}

}  // namespace greenpod
