#include "hypgame/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "hypgame/error.hpp"
#include "hypgame/rng.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

namespace {

// Tokens of the text with every entity mention replaced by one placeholder.
std::vector<std::string> non_entity_tokens(const std::string& text, const Lexicon& lexicon) {
  const std::string norm = normalize_statement(text);
  std::string masked;
  std::size_t pos = 0;
  for (const auto& span : lexicon.tag_spans(norm)) {
    masked.append(norm, pos, span.begin - pos);
    masked.append(" \x01 ");
    pos = span.end;
  }
  masked.append(norm, pos, std::string::npos);
  return tokenize(masked);
}

std::size_t symmetric_difference(const EntitySet& a, const EntitySet& b) {
  std::size_t n = 0;
  for (const auto& e : a) n += b.count(e) ? 0 : 1;
  for (const auto& e : b) n += a.count(e) ? 0 : 1;
  return n;
}

bool matches_policy(const CorruptionEntry& e, const CorruptionPolicy& policy) {
  return (!policy.error_type || e.error_type == *policy.error_type) && e.difficulty == policy.difficulty;
}

}  // namespace

std::vector<std::string> validate_corruption(const CorruptionEntry& entry, const Lexicon* lexicon) {
  std::vector<std::string> reasons;
  if (trim(entry.pathway_id).empty()) reasons.emplace_back("missing pathway_id");
  if (normalize_statement(entry.corrupted).empty()) reasons.emplace_back("empty corrupted statement");
  const bool insert = entry.operation == CorruptionOperation::insert;
  if (entry.error_type == ErrorType::unsupported_step && !insert) {
    reasons.emplace_back("unsupported_step must use operation insert");
  }
  if (insert && entry.error_type != ErrorType::unsupported_step) {
    reasons.emplace_back(std::string("operation insert is only allowed for unsupported_step, not ") +
                         to_string(entry.error_type));
  }
  if (!insert) {
    if (normalize_statement(entry.original).empty()) {
      reasons.emplace_back("replace needs a non-empty original statement");
    } else if (normalize_statement(entry.original) == normalize_statement(entry.corrupted)) {
      reasons.emplace_back("corrupted statement equals the original after normalization");
    }
  }
  if (!reasons.empty() || !lexicon || insert) return reasons;

  const EntitySet before = tag_entities(entry.original, *lexicon);
  const EntitySet after = tag_entities(entry.corrupted, *lexicon);
  const std::size_t diff = symmetric_difference(before, after);
  const bool same_frame = non_entity_tokens(entry.original, *lexicon) ==
                          non_entity_tokens(entry.corrupted, *lexicon);
  if (entry.error_type == ErrorType::wrong_entity) {
    if (diff != 2 || before.size() != after.size()) {
      reasons.push_back("wrong_entity must substitute exactly one entity (symmetric difference " +
                        std::to_string(diff) + ", expected 2)");
    }
    if (!same_frame) reasons.emplace_back("wrong_entity must keep every non-entity token unchanged");
  } else if (entry.error_type == ErrorType::wrong_relation) {
    if (diff != 0) {
      reasons.push_back("wrong_relation must keep the entity set (symmetric difference " +
                        std::to_string(diff) + ", expected 0)");
    }
    if (same_frame) reasons.emplace_back("wrong_relation must change at least one non-entity token");
  }
  return reasons;
}

void CorruptionBank::add(CorruptionEntry entry) {
  auto pathway_id = entry.pathway_id;
  by_pathway_[pathway_id].push_back(std::move(entry));
}

std::size_t CorruptionBank::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, entries] : by_pathway_) n += entries.size();
  return n;
}

const std::vector<CorruptionEntry>& CorruptionBank::entries_for(const std::string& pathway_id) const {
  static const std::vector<CorruptionEntry> none;
  auto it = by_pathway_.find(pathway_id);
  return it == by_pathway_.end() ? none : it->second;
}

CorruptionBank read_bank(std::istream& in, const Lexicon* lexicon) {
  CorruptionBank bank;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    CorruptionEntry entry;
    try {
      entry = nlohmann::json::parse(line).get<CorruptionEntry>();
    } catch (const std::exception& e) {
      throw InputError("bank line " + std::to_string(line_no) + ": malformed entry: " + e.what(), {line_no});
    }
    auto reasons = validate_corruption(entry, lexicon);
    if (!reasons.empty()) {
      throw InputError("bank line " + std::to_string(line_no) + ": " + join(reasons, "; "), {line_no});
    }
    bank.add(std::move(entry));
  }
  return bank;
}

CorruptionBank load_bank(const std::filesystem::path& path, const Lexicon* lexicon) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read corruption bank " + path.string());
  return read_bank(in, lexicon);
}

void validate(const CorruptionPolicy& policy) {
  if (!(policy.max_fraction > 0.0 && policy.max_fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_input, "max_fraction must lie in (0, 1]");
  }
  if (!(policy.fraction > 0.0 && policy.fraction <= policy.max_fraction)) {
    throw Error(ErrorCode::invalid_input, "fraction " + std::to_string(policy.fraction) + " outside (0, " +
                                              std::to_string(policy.max_fraction) + "]");
  }
}

std::size_t corruption_count(double fraction, std::size_t n_steps) {
  // The epsilon keeps products such as 0.35 * 10 on the half-up side.
  const double scaled = fraction * static_cast<double>(n_steps);
  const auto rounded = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
  return std::max<std::size_t>(1, rounded);
}

CorruptionPlan sample_plan(const HypothesisState& pathway, const CorruptionBank& bank,
                           const CorruptionPolicy& policy) {
  validate(policy);
  const std::size_t n = pathway.size();
  if (n == 0) throw Error(ErrorCode::invalid_input, "cannot corrupt an empty pathway");
  const std::size_t count = corruption_count(policy.fraction, n);

  std::map<std::size_t, std::vector<const CorruptionEntry*>> by_anchor;
  for (const auto& e : bank.entries_for(pathway.pathway_id)) {
    if (!matches_policy(e, policy) || e.anchor_index >= n) continue;
    if (e.operation == CorruptionOperation::replace &&
        normalize_statement(e.original) != normalize_statement(pathway.fragments[e.anchor_index].text)) {
      continue;
    }
    by_anchor[e.anchor_index].push_back(&e);
  }
  if (by_anchor.size() < count) {
    throw Error(ErrorCode::insufficient_bank,
                "pathway '" + pathway.pathway_id + "' needs " + std::to_string(count) +
                    " corrupted steps but the bank has matching entries for only " +
                    std::to_string(by_anchor.size()));
  }

  std::vector<std::size_t> anchors;
  for (const auto& [a, _] : by_anchor) anchors.push_back(a);
  Rng rng(policy.seed);
  for (std::size_t i = anchors.size(); i > 1; --i) {
    std::swap(anchors[i - 1], anchors[rng.below(i)]);
  }
  anchors.resize(count);

  CorruptionPlan plan;
  plan.policy = policy;
  for (std::size_t a : anchors) {
    const auto& candidates = by_anchor.at(a);
    const std::size_t pick = candidates.size() > 1 ? rng.below(candidates.size()) : 0;
    plan.selections.push_back(*candidates[pick]);
  }
  std::sort(plan.selections.begin(), plan.selections.end(),
            [](const CorruptionEntry& x, const CorruptionEntry& y) { return x.anchor_index < y.anchor_index; });
  return plan;
}

CorruptionResult apply_plan(const HypothesisState& pathway, const CorruptionPlan& plan) {
  const std::size_t n = pathway.size();
  std::map<std::size_t, const CorruptionEntry*> by_anchor;
  for (const auto& sel : plan.selections) {
    if (sel.anchor_index >= n) {
      throw Error(ErrorCode::out_of_bounds, "anchor " + std::to_string(sel.anchor_index) +
                                                " outside a pathway of " + std::to_string(n) + " steps");
    }
    if (!by_anchor.emplace(sel.anchor_index, &sel).second) {
      throw Error(ErrorCode::invalid_input,
                  "two corruptions target step " + std::to_string(sel.anchor_index));
    }
    if (sel.operation == CorruptionOperation::replace &&
        normalize_statement(sel.original) != normalize_statement(pathway.fragments[sel.anchor_index].text)) {
      throw Error(ErrorCode::invalid_input,
                  "step " + std::to_string(sel.anchor_index) + " does not match the entry's original statement");
    }
  }

  CorruptionResult result;
  result.corrupted = pathway;
  result.corrupted.fragments.clear();
  std::set<std::string> reserved;
  for (std::size_t i = 0; i < n; ++i) {
    Fragment f = pathway.fragments[i];
    auto it = by_anchor.find(i);
    const CorruptionEntry* sel = it == by_anchor.end() ? nullptr : it->second;
    if (sel && sel->operation == CorruptionOperation::replace) {
      f.text = sel->corrupted;
      f.kind = FragmentKind::claim;
      f.triple.reset();
      result.applied.push_back({i, sel->operation, sel->error_type, sel->difficulty, sel->original,
                                sel->corrupted, f.id, result.corrupted.fragments.size()});
    }
    result.corrupted.fragments.push_back(std::move(f));
    if (sel && sel->operation == CorruptionOperation::insert) {
      Fragment added;
      added.id = fresh_fragment_id(pathway, sel->corrupted, reserved);
      added.text = sel->corrupted;
      added.provenance = {{EvidenceSource::seed_input, std::nullopt, std::nullopt}};
      reserved.insert(added.id);
      result.applied.push_back({i, sel->operation, sel->error_type, sel->difficulty, sel->original,
                                sel->corrupted, added.id, result.corrupted.fragments.size()});
      result.corrupted.fragments.push_back(std::move(added));
    }
  }
  for (std::size_t i = 0; i < result.corrupted.fragments.size(); ++i) {
    result.corrupted.fragments[i].step_index = i;
  }
  validate(result.corrupted);
  return result;
}

HypothesisState revert(const HypothesisState& corrupted, std::span<const AppliedCorruption> applied) {
  std::set<std::string> inserted;
  std::map<std::string, std::string> restore;
  for (const auto& a : applied) {
    if (!corrupted.find(a.fragment_id)) {
      throw Error(ErrorCode::unknown_id, "corrupted pathway lacks fragment " + a.fragment_id);
    }
    if (a.operation == CorruptionOperation::insert) {
      inserted.insert(a.fragment_id);
    } else {
      restore[a.fragment_id] = a.original;
    }
  }
  HypothesisState out = corrupted;
  out.fragments.clear();
  for (const auto& f : corrupted.fragments) {
    if (inserted.count(f.id)) continue;
    Fragment g = f;
    if (auto it = restore.find(f.id); it != restore.end()) g.text = it->second;
    g.step_index = out.fragments.size();
    out.fragments.push_back(std::move(g));
  }
  validate(out);
  return out;
}

}  // namespace hypgame
