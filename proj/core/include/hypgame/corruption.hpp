#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypgame/hypothesis.hpp"
#include "hypgame/lexicon.hpp"

namespace hypgame {

enum class ErrorType { wrong_entity, wrong_relation, unsupported_step };
enum class Difficulty { L1, L2 };
enum class CorruptionOperation { replace, insert };

struct CorruptionEntry {
  std::string pathway_id;
  std::size_t anchor_index = 0;
  ErrorType error_type = ErrorType::wrong_entity;
  Difficulty difficulty = Difficulty::L1;
  CorruptionOperation operation = CorruptionOperation::replace;
  std::string original;  // empty for insert
  std::string corrupted;

  bool operator==(const CorruptionEntry&) const = default;
};

// Structural checks always; entity checks only when a lexicon is given.
// Returns human-readable reasons, empty when the entry is valid.
std::vector<std::string> validate_corruption(const CorruptionEntry& entry,
                                             const Lexicon* lexicon = nullptr);

class CorruptionBank {
 public:
  void add(CorruptionEntry entry);
  std::size_t size() const noexcept;
  const std::vector<CorruptionEntry>& entries_for(const std::string& pathway_id) const;
  const std::map<std::string, std::vector<CorruptionEntry>>& by_pathway() const noexcept {
    return by_pathway_;
  }

 private:
  std::map<std::string, std::vector<CorruptionEntry>> by_pathway_;
};

// JSONL of CorruptionEntry. Malformed lines and invalid entries are rejected
// with an InputError naming the 1-based line.
CorruptionBank read_bank(std::istream& in, const Lexicon* lexicon = nullptr);
CorruptionBank load_bank(const std::filesystem::path& path, const Lexicon* lexicon = nullptr);

struct CorruptionPolicy {
  std::optional<ErrorType> error_type;  // nullopt = mixed
  Difficulty difficulty = Difficulty::L1;
  double fraction = 0.1;
  std::uint64_t seed = 0;
  double max_fraction = 0.4;

  bool operator==(const CorruptionPolicy&) const = default;
};
void validate(const CorruptionPolicy& policy);

struct AppliedCorruption {
  std::size_t anchor_index = 0;
  CorruptionOperation operation = CorruptionOperation::replace;
  ErrorType error_type = ErrorType::wrong_entity;
  Difficulty difficulty = Difficulty::L1;
  std::string original;
  std::string corrupted;
  std::string fragment_id;   // id carrying the corrupted text
  std::size_t position = 0;  // its index in the corrupted pathway

  bool operator==(const AppliedCorruption&) const = default;
};

struct CorruptionPlan {
  CorruptionPolicy policy;
  std::vector<CorruptionEntry> selections;  // ascending anchor_index
  std::vector<AppliedCorruption> applied;   // filled once the plan is applied

  bool operator==(const CorruptionPlan&) const = default;
};

// max(1, round-half-up(fraction * n_steps)).
std::size_t corruption_count(double fraction, std::size_t n_steps);

// Throws insufficient_bank when fewer eligible steps exist than required.
CorruptionPlan sample_plan(const HypothesisState& pathway, const CorruptionBank& bank,
                           const CorruptionPolicy& policy);

struct CorruptionResult {
  HypothesisState corrupted;
  std::vector<AppliedCorruption> applied;
};

// Replace swaps the anchor's text and keeps its id; insert adds a new fragment
// right after the anchor. Step indices of the result are list positions.
CorruptionResult apply_plan(const HypothesisState& pathway, const CorruptionPlan& plan);

// Undoes apply_plan for a pathway whose step indices were list positions.
HypothesisState revert(const HypothesisState& corrupted,
                       std::span<const AppliedCorruption> applied);

}  // namespace hypgame
