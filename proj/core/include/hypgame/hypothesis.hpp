#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hypgame {

enum class FragmentKind { claim, triple };

enum class EvidenceSource { corpus_doc, introspection, debate, seed_input };

struct EvidenceRef {
  EvidenceSource source = EvidenceSource::seed_input;
  std::optional<std::string> doc_id;  // required for corpus_doc
  std::optional<std::string> snippet;

  bool operator==(const EvidenceRef&) const = default;
};

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;

  bool operator==(const Triple&) const = default;
};

// One statement of a hypothesis. The id is stable across edits; step_index is
// only an ordering key and may be shifted when fragments are inserted.
struct Fragment {
  std::string id;
  FragmentKind kind = FragmentKind::claim;
  std::string text;
  std::optional<Triple> triple;  // present iff kind == triple
  std::vector<EvidenceRef> provenance;
  std::uint64_t step_index = 0;

  bool operator==(const Fragment&) const = default;
};

// Equality of everything except step_index. This is what "left untouched"
// means for locality checks.
bool same_content(const Fragment& a, const Fragment& b);

struct HypothesisState {
  std::string pathway_id;
  std::string pathway_name;
  std::vector<Fragment> fragments;
  std::uint64_t round = 0;

  bool operator==(const HypothesisState&) const = default;

  const Fragment* find(std::string_view id) const;
  std::optional<std::size_t> position_of(std::string_view id) const;
  std::set<std::string> ids() const;
  bool empty() const noexcept { return fragments.empty(); }
  std::size_t size() const noexcept { return fragments.size(); }
};

// Ordered comparison of normalized fragment texts; ignores ids and metadata.
bool same_hypothesis(const HypothesisState& a, const HypothesisState& b);

// Human-readable list of broken invariants; empty when the state is valid.
std::vector<std::string> invariant_violations(const HypothesisState& state);
// Throws Error(invariant_violation) listing every broken invariant.
void validate(const HypothesisState& state);
void validate(const Fragment& fragment);
void validate(const EvidenceRef& ref);

struct Context {
  std::string task_goal;
  std::vector<std::string> priors;
  std::optional<std::string> corpus_ref;
};
void validate(const Context& context);

struct AddOp {
  Fragment fragment;
  std::size_t position = 0;  // index in the list at the time the op is applied

  bool operator==(const AddOp&) const = default;
};

struct RemoveOp {
  std::string fragment_id;

  bool operator==(const RemoveOp&) const = default;
};

struct ReplaceOp {
  std::string fragment_id;
  Fragment fragment;  // stored under fragment_id regardless of fragment.id

  bool operator==(const ReplaceOp&) const = default;
};

using DeltaOp = std::variant<AddOp, RemoveOp, ReplaceOp>;

struct DeltaSet {
  std::vector<DeltaOp> ops;

  bool empty() const noexcept { return ops.empty(); }
  bool operator==(const DeltaSet&) const = default;
};

const std::string& referenced_id(const DeltaOp& op);
void validate(const DeltaSet& delta);

struct PathwayRecord {
  std::string name;
  std::vector<std::string> steps;
  std::optional<std::string> id;
};

HypothesisState parse_pathway(const PathwayRecord& record);
PathwayRecord to_pathway_record(const HypothesisState& state);

// Id-keyed delta such that apply_delta(before, result) == after. Surviving
// fragments must keep their relative order.
DeltaSet diff_states(const HypothesisState& before, const HypothesisState& after);

// Ops apply in order. Afterwards step indices are pushed forward where an
// insertion left no gap, then the state invariants are re-checked.
HypothesisState apply_delta(const HypothesisState& state, const DeltaSet& delta);

struct Violation {
  std::string kind;  // "duplicate", "ordering", "region", ...
  std::string message;
  std::vector<std::string> fragment_ids;
  bool repaired = false;

  bool operator==(const Violation&) const = default;
};

struct ConsistencyResult {
  HypothesisState state;
  std::vector<Violation> violations;
};

// Repairs confined to `touched`: drops in-region duplicates and renumbers
// in-region step indices. Problems that would need an out-of-region edit are
// reported unrepaired.
ConsistencyResult enforce_consistency(const HypothesisState& state,
                                      const std::set<std::string>& touched);

// Deterministic id for a new fragment that collides neither with `state` nor
// with ids already handed out for the same edit.
std::string fresh_fragment_id(const HypothesisState& state, std::string_view text,
                              const std::set<std::string>& reserved = {});

Fragment make_claim(std::string id, std::string text, std::vector<EvidenceRef> provenance,
                    std::uint64_t step_index = 0);

}  // namespace hypgame
