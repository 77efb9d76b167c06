#include "hypgame/error.hpp"

namespace hypgame {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::unknown_id: return "unknown_id";
    case ErrorCode::out_of_bounds: return "out_of_bounds";
    case ErrorCode::invariant_violation: return "invariant_violation";
    case ErrorCode::duplicate_name: return "duplicate_name";
    case ErrorCode::unknown_move: return "unknown_move";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::gateway: return "gateway";
    case ErrorCode::region_violation: return "region_violation";
    case ErrorCode::integrity: return "integrity";
    case ErrorCode::insufficient_bank: return "insufficient_bank";
    case ErrorCode::undefined_metric: return "undefined_metric";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

BudgetExceeded::BudgetExceeded(std::size_t counted, std::size_t k_max)
    : Error(ErrorCode::budget_exceeded,
            "BudgetExceeded(" + std::to_string(counted) + "): " + std::to_string(counted) +
                " atomic moves requested, k_max is " + std::to_string(k_max)),
      counted_(counted),
      k_max_(k_max) {}

}  // namespace hypgame
