#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypgame/error.hpp"
#include "hypgame/gateway.hpp"
#include "hypgame/hypothesis.hpp"
#include "hypgame/lexicon.hpp"
#include "hypgame/prompts.hpp"

namespace hypgame {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const PRF&) const = default;
};

// Both empty counts as a perfect match.
PRF entity_prf(const EntitySet& reference, const EntitySet& generated);

EntitySet state_entities(const HypothesisState& state, const Lexicon& lexicon);

struct RecallAttributes {
  bool input_entities = false;
  bool output_entities = false;
  bool directionality = false;
  bool reaction_type = false;

  bool operator==(const RecallAttributes&) const = default;
};

// Exactly one of `persists` (corruption task) and `attributes` (reconstruction)
// is set.
struct JudgeVerdict {
  std::string item_id;
  std::optional<bool> persists;
  std::optional<RecallAttributes> attributes;

  bool operator==(const JudgeVerdict&) const = default;
};
void validate(const JudgeVerdict& verdict);

class PersistenceJudge {
 public:
  virtual ~PersistenceJudge() = default;
  virtual bool persists(std::string_view original, std::string_view corrupted,
                        const HypothesisState& output) = 0;
};

// Persists iff the normalized corrupted statement is a substring of some
// normalized fragment and the normalized original is not.
class RulePersistenceJudge final : public PersistenceJudge {
 public:
  bool persists(std::string_view original, std::string_view corrupted,
                const HypothesisState& output) override;
};

class GatewayPersistenceJudge final : public PersistenceJudge {
 public:
  GatewayPersistenceJudge(Gateway& gateway, const PromptLibrary& prompts)
      : gateway_(gateway), prompts_(prompts) {}
  bool persists(std::string_view original, std::string_view corrupted,
                const HypothesisState& output) override;

 private:
  Gateway& gateway_;
  const PromptLibrary& prompts_;
};

bool judge_persistence(std::string_view original, std::string_view corrupted,
                       const HypothesisState& output, PersistenceJudge& judge);

// Fraction of verdicts with persists == false. Throws on an empty list or a
// verdict without a persistence label.
double error_removal_rate(std::span<const JudgeVerdict> verdicts);
double persistence_rate(std::span<const JudgeVerdict> verdicts);

class RecallJudge {
 public:
  virtual ~RecallJudge() = default;
  virtual RecallAttributes judge(std::string_view reaction, const HypothesisState& hypothesis) = 0;
};

// Strict reading: all four attributes hold iff the normalized reaction text
// occurs inside a normalized fragment, otherwise all four are false.
class RuleRecallJudge final : public RecallJudge {
 public:
  RecallAttributes judge(std::string_view reaction, const HypothesisState& hypothesis) override;
};

class GatewayRecallJudge final : public RecallJudge {
 public:
  GatewayRecallJudge(Gateway& gateway, const PromptLibrary& prompts)
      : gateway_(gateway), prompts_(prompts) {}
  RecallAttributes judge(std::string_view reaction, const HypothesisState& hypothesis) override;

 private:
  Gateway& gateway_;
  const PromptLibrary& prompts_;
};

struct DetailedRecall {
  double input_entities = 0.0;
  double output_entities = 0.0;
  double directionality = 0.0;
  double reaction_type = 0.0;
  std::vector<JudgeVerdict> verdicts;  // item_id = "r<index>"
};

// Judge failure part way through; verdicts gathered so far are kept.
class PartialJudgingError : public Error {
 public:
  PartialJudgingError(const std::string& message, std::vector<JudgeVerdict> partial)
      : Error(ErrorCode::gateway, message), partial_(std::move(partial)) {}
  const std::vector<JudgeVerdict>& partial() const noexcept { return partial_; }

 private:
  std::vector<JudgeVerdict> partial_;
};

DetailedRecall detailed_recall(std::span<const std::string> reference_reactions,
                               const HypothesisState& hypothesis, RecallJudge& judge);

// Raw word edit distance (insert, delete, substitute all cost 1).
std::size_t levenshtein_words(std::span<const std::string> a, std::span<const std::string> b);
// Distance over whitespace words of the normalized texts divided by the
// reference word count. Throws invalid_input for an empty reference.
double levenshtein_word_norm(std::string_view reference, std::string_view generated);

struct EntityDrift {
  std::size_t added = 0;
  std::size_t removed = 0;

  std::size_t total() const noexcept { return added + removed; }
  bool operator==(const EntityDrift&) const = default;
};

// `kind` restricts the lexicon first (gene-level drift uses EntityKind::gene).
EntityDrift entity_drift(const HypothesisState& reference, const HypothesisState& generated,
                         const Lexicon& lexicon, std::optional<EntityKind> kind = std::nullopt);

// --- inter-rater agreement ---------------------------------------------------

using Label = std::optional<int>;

struct LabelMatrix {
  std::vector<std::string> raters;
  std::vector<std::string> items;
  std::vector<std::vector<Label>> labels;  // labels[rater][item]; nullopt = missing

  bool operator==(const LabelMatrix&) const = default;
};
void validate(const LabelMatrix& matrix);

// Nominal alpha from the coincidence matrix. Items with fewer than two labels
// are ignored. Throws undefined_metric when there is no label variation and
// invalid_input when fewer than two usable items remain.
double krippendorff_alpha(const LabelMatrix& matrix);

// 1 iff both annotators gave 1; missing if either label is missing.
std::vector<Label> strict_consensus(std::span<const Label> a, std::span<const Label> b);

}  // namespace hypgame
