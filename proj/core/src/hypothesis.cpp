#include "hypgame/hypothesis.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "hypgame/error.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

bool same_content(const Fragment& a, const Fragment& b) {
  return a.id == b.id && a.kind == b.kind && a.text == b.text && a.triple == b.triple &&
         a.provenance == b.provenance;
}

const Fragment* HypothesisState::find(std::string_view id) const {
  for (const auto& f : fragments) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

std::optional<std::size_t> HypothesisState::position_of(std::string_view id) const {
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (fragments[i].id == id) return i;
  }
  return std::nullopt;
}

std::set<std::string> HypothesisState::ids() const {
  std::set<std::string> out;
  for (const auto& f : fragments) out.insert(f.id);
  return out;
}

bool same_hypothesis(const HypothesisState& a, const HypothesisState& b) {
  if (a.fragments.size() != b.fragments.size()) return false;
  for (std::size_t i = 0; i < a.fragments.size(); ++i) {
    if (normalize_statement(a.fragments[i].text) != normalize_statement(b.fragments[i].text)) {
      return false;
    }
  }
  return true;
}

namespace {

void fragment_violations(const Fragment& f, std::vector<std::string>& out) {
  if (f.id.empty()) out.push_back("fragment with empty id");
  if (normalize_statement(f.text).empty()) out.push_back("fragment " + f.id + " has empty text");
  if (f.kind == FragmentKind::triple) {
    if (!f.triple || f.triple->subject.empty() || f.triple->relation.empty() ||
        f.triple->object.empty()) {
      out.push_back("triple fragment " + f.id + " lacks subject, relation or object");
    }
  } else if (f.triple) {
    out.push_back("claim fragment " + f.id + " carries a triple");
  }
  for (const auto& ref : f.provenance) {
    if (ref.source == EvidenceSource::corpus_doc && (!ref.doc_id || ref.doc_id->empty())) {
      out.push_back("fragment " + f.id + " cites a corpus document without doc_id");
    }
  }
}

[[noreturn]] void throw_violations(const std::vector<std::string>& problems) {
  throw Error(ErrorCode::invariant_violation, "invariant violation: " + join(problems, "; "));
}

}  // namespace

std::vector<std::string> invariant_violations(const HypothesisState& state) {
  std::vector<std::string> out;
  std::unordered_set<std::string> ids;
  std::unordered_map<std::string, std::string> texts;
  for (std::size_t i = 0; i < state.fragments.size(); ++i) {
    const auto& f = state.fragments[i];
    fragment_violations(f, out);
    if (!ids.insert(f.id).second) out.push_back("duplicate fragment id " + f.id);
    const std::string norm = normalize_statement(f.text);
    if (!norm.empty()) {
      auto [it, inserted] = texts.emplace(norm, f.id);
      if (!inserted) {
        out.push_back("fragments " + it->second + " and " + f.id + " have identical text");
      }
    }
    if (i > 0 && f.step_index <= state.fragments[i - 1].step_index) {
      out.push_back("step_index not increasing at " + f.id);
    }
  }
  return out;
}

void validate(const HypothesisState& state) {
  auto problems = invariant_violations(state);
  if (!problems.empty()) throw_violations(problems);
}

void validate(const Fragment& fragment) {
  std::vector<std::string> problems;
  fragment_violations(fragment, problems);
  if (!problems.empty()) throw_violations(problems);
}

void validate(const EvidenceRef& ref) {
  if (ref.source == EvidenceSource::corpus_doc && (!ref.doc_id || ref.doc_id->empty())) {
    throw Error(ErrorCode::invariant_violation, "corpus evidence without doc_id");
  }
}

void validate(const Context& context) {
  if (trim(context.task_goal).empty()) {
    throw Error(ErrorCode::invalid_input, "context task_goal must be non-empty");
  }
}

const std::string& referenced_id(const DeltaOp& op) {
  return std::visit(
      [](const auto& o) -> const std::string& {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, AddOp>) {
          return o.fragment.id;
        } else {
          return o.fragment_id;
        }
      },
      op);
}

void validate(const DeltaSet& delta) {
  std::unordered_set<std::string> seen;
  for (const auto& op : delta.ops) {
    if (!seen.insert(referenced_id(op)).second) {
      throw Error(ErrorCode::invalid_input,
                  "delta references fragment " + referenced_id(op) + " more than once");
    }
  }
}

HypothesisState parse_pathway(const PathwayRecord& record) {
  if (trim(record.name).empty()) throw InputError("pathway record is missing a name");
  if (record.steps.empty()) throw InputError("pathway '" + record.name + "' has an empty step list");

  std::vector<std::size_t> blank;
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    if (normalize_statement(record.steps[i]).empty()) blank.push_back(i);
  }
  if (!blank.empty()) throw InputError("pathway '" + record.name + "' has empty steps", blank);

  std::map<std::string, std::vector<std::size_t>> by_text;
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    by_text[normalize_statement(record.steps[i])].push_back(i);
  }
  std::vector<std::size_t> dupes;
  for (const auto& [text, where] : by_text) {
    if (where.size() > 1) dupes.insert(dupes.end(), where.begin(), where.end());
  }
  if (!dupes.empty()) {
    std::sort(dupes.begin(), dupes.end());
    std::vector<std::string> idx;
    for (auto d : dupes) idx.push_back(std::to_string(d));
    throw InputError("pathway '" + record.name + "' has steps that are duplicates after normalization: " +
                         join(idx, ", "),
                     dupes);
  }

  HypothesisState state;
  state.pathway_name = record.name;
  state.pathway_id = record.id.value_or(record.name);
  state.fragments.reserve(record.steps.size());
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    state.fragments.push_back(make_claim("s" + std::to_string(i), record.steps[i],
                                         {EvidenceRef{EvidenceSource::seed_input, {}, {}}}, i));
  }
  return state;
}

PathwayRecord to_pathway_record(const HypothesisState& state) {
  PathwayRecord record;
  record.name = state.pathway_name;
  if (state.pathway_id != state.pathway_name) record.id = state.pathway_id;
  for (const auto& f : state.fragments) record.steps.push_back(f.text);
  return record;
}

DeltaSet diff_states(const HypothesisState& before, const HypothesisState& after) {
  std::unordered_map<std::string, const Fragment*> after_by_id;
  for (const auto& f : after.fragments) after_by_id.emplace(f.id, &f);
  std::unordered_set<std::string> before_ids;
  for (const auto& f : before.fragments) before_ids.insert(f.id);

  std::vector<std::string> survivors_before;
  for (const auto& f : before.fragments) {
    if (after_by_id.count(f.id)) survivors_before.push_back(f.id);
  }
  std::vector<std::string> survivors_after;
  for (const auto& f : after.fragments) {
    if (before_ids.count(f.id)) survivors_after.push_back(f.id);
  }
  if (survivors_before != survivors_after) {
    throw Error(ErrorCode::invalid_input,
                "diff_states: surviving fragments were reordered; not expressible as a delta");
  }

  DeltaSet delta;
  for (const auto& f : before.fragments) {
    if (!after_by_id.count(f.id)) delta.ops.emplace_back(RemoveOp{f.id});
  }
  for (const auto& f : before.fragments) {
    auto it = after_by_id.find(f.id);
    if (it != after_by_id.end() && !(*it->second == f)) {
      delta.ops.emplace_back(ReplaceOp{f.id, *it->second});
    }
  }
  for (std::size_t i = 0; i < after.fragments.size(); ++i) {
    const auto& g = after.fragments[i];
    if (!before_ids.count(g.id)) delta.ops.emplace_back(AddOp{g, i});
  }
  return delta;
}

HypothesisState apply_delta(const HypothesisState& state, const DeltaSet& delta) {
  validate(delta);
  HypothesisState out = state;
  auto& frags = out.fragments;
  for (const auto& op : delta.ops) {
    if (const auto* add = std::get_if<AddOp>(&op)) {
      if (add->position > frags.size()) {
        throw Error(ErrorCode::out_of_bounds, "add position " + std::to_string(add->position) +
                                                  " beyond hypothesis size " +
                                                  std::to_string(frags.size()));
      }
      if (out.find(add->fragment.id)) {
        throw Error(ErrorCode::invariant_violation,
                    "add would duplicate fragment id " + add->fragment.id);
      }
      frags.insert(frags.begin() + static_cast<std::ptrdiff_t>(add->position), add->fragment);
    } else if (const auto* rem = std::get_if<RemoveOp>(&op)) {
      auto pos = out.position_of(rem->fragment_id);
      if (!pos) throw Error(ErrorCode::unknown_id, "remove of unknown fragment " + rem->fragment_id);
      frags.erase(frags.begin() + static_cast<std::ptrdiff_t>(*pos));
    } else {
      const auto& rep = std::get<ReplaceOp>(op);
      auto pos = out.position_of(rep.fragment_id);
      if (!pos) throw Error(ErrorCode::unknown_id, "replace of unknown fragment " + rep.fragment_id);
      frags[*pos] = rep.fragment;
      frags[*pos].id = rep.fragment_id;
    }
  }
  for (std::size_t i = 1; i < frags.size(); ++i) {
    if (frags[i].step_index <= frags[i - 1].step_index) {
      frags[i].step_index = frags[i - 1].step_index + 1;
    }
  }
  validate(out);
  return out;
}

ConsistencyResult enforce_consistency(const HypothesisState& state,
                                      const std::set<std::string>& touched) {
  ConsistencyResult result{state, {}};
  auto& frags = result.state.fragments;
  auto in_region = [&](const Fragment& f) { return touched.count(f.id) > 0; };

  std::unordered_map<std::string, std::size_t> first_seen;
  std::vector<Fragment> kept;
  kept.reserve(frags.size());
  for (auto& f : frags) {
    const std::string norm = normalize_statement(f.text);
    auto it = first_seen.find(norm);
    if (it == first_seen.end()) {
      first_seen.emplace(norm, kept.size());
      kept.push_back(std::move(f));
      continue;
    }
    const Fragment& earlier = kept[it->second];
    if (in_region(f) && in_region(earlier)) {
      result.violations.push_back({"duplicate",
                                   "dropped " + f.id + ": duplicate of " + earlier.id,
                                   {earlier.id, f.id},
                                   true});
      continue;
    }
    result.violations.push_back({"duplicate",
                                 f.id + " duplicates " + earlier.id +
                                     " across the region boundary; not repaired",
                                 {earlier.id, f.id},
                                 false});
    kept.push_back(std::move(f));
  }
  frags = std::move(kept);

  for (std::size_t i = 1; i < frags.size(); ++i) {
    if (frags[i].step_index > frags[i - 1].step_index) continue;
    if (in_region(frags[i])) {
      frags[i].step_index = frags[i - 1].step_index + 1;
      result.violations.push_back({"ordering", "renumbered " + frags[i].id, {frags[i].id}, true});
    } else {
      result.violations.push_back({"ordering",
                                   "step_index of " + frags[i].id +
                                       " out of order outside the region; not repaired",
                                   {frags[i - 1].id, frags[i].id},
                                   false});
    }
  }
  return result;
}

std::string fresh_fragment_id(const HypothesisState& state, std::string_view text,
                              const std::set<std::string>& reserved) {
  const std::string base = "h" + to_hex(fnv1a64(normalize_statement(text)), 12);
  auto taken = [&](const std::string& id) { return state.find(id) || reserved.count(id); };
  if (!taken(base)) return base;
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + "-" + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

Fragment make_claim(std::string id, std::string text, std::vector<EvidenceRef> provenance,
                    std::uint64_t step_index) {
  Fragment f;
  f.id = std::move(id);
  f.kind = FragmentKind::claim;
  f.text = std::move(text);
  f.provenance = std::move(provenance);
  f.step_index = step_index;
  return f;
}

}  // namespace hypgame
