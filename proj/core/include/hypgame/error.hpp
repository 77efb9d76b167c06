#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypgame {

enum class ErrorCode {
  invalid_input,
  unknown_id,
  out_of_bounds,
  invariant_violation,
  duplicate_name,
  unknown_move,
  budget_exceeded,
  gateway,
  region_violation,
  integrity,
  insufficient_bank,
  undefined_metric,
  io,
};

const char* to_string(ErrorCode code) noexcept;

// Base of every error the library throws. Callers that only care about the
// category switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Rejected input that can be pinned to specific positions (steps, lines).
class InputError : public Error {
 public:
  InputError(const std::string& message, std::vector<std::size_t> indices = {})
      : Error(ErrorCode::invalid_input, message), indices_(std::move(indices)) {}

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t counted, std::size_t k_max);

  std::size_t counted() const noexcept { return counted_; }
  std::size_t k_max() const noexcept { return k_max_; }

 private:
  std::size_t counted_;
  std::size_t k_max_;
};

class IntegrityError : public Error {
 public:
  IntegrityError(std::size_t round, const std::string& message)
      : Error(ErrorCode::integrity, message), round_(round) {}

  // Index of the first round whose recorded result could not be reproduced.
  std::size_t round() const noexcept { return round_; }

 private:
  std::size_t round_;
};

}  // namespace hypgame
