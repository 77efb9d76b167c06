#include "hypgame/evaluation.hpp"

#include <algorithm>

#include "hypgame/agents.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

PRF entity_prf(const EntitySet& reference, const EntitySet& generated) {
  if (reference.empty() && generated.empty()) return {1.0, 1.0, 1.0};
  std::size_t common = 0;
  for (const auto& e : generated) common += reference.count(e);
  PRF out;
  if (!generated.empty()) out.precision = static_cast<double>(common) / static_cast<double>(generated.size());
  if (!reference.empty()) out.recall = static_cast<double>(common) / static_cast<double>(reference.size());
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

EntitySet state_entities(const HypothesisState& state, const Lexicon& lexicon) {
  EntitySet out;
  for (const auto& f : state.fragments) out.merge(tag_entities(f.text, lexicon));
  return out;
}

void validate(const JudgeVerdict& verdict) {
  if (verdict.persists.has_value() == verdict.attributes.has_value()) {
    throw Error(ErrorCode::invalid_input,
                "verdict '" + verdict.item_id + "' must carry exactly one of persists / attributes");
  }
}

bool RulePersistenceJudge::persists(std::string_view original, std::string_view corrupted,
                                    const HypothesisState& output) {
  const std::string c = normalize_statement(corrupted);
  const std::string o = normalize_statement(original);
  bool has_corrupted = false;
  bool has_original = false;
  for (const auto& f : output.fragments) {
    const std::string t = normalize_statement(f.text);
    if (!c.empty() && t.find(c) != std::string::npos) has_corrupted = true;
    if (!o.empty() && t.find(o) != std::string::npos) has_original = true;
  }
  return has_corrupted && !has_original;
}

namespace {

bool as_flag(const nlohmann::json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number()) return v.get<double>() != 0.0;
  if (v.is_string()) return trim(v.get<std::string>()) == "1";
  throw GatewayError(GatewayFailure::protocol, "judge label is not 0/1");
}

nlohmann::json judge_reply(Gateway& gateway, const RenderedPrompt& prompt) {
  auto reply = complete_with_retry(gateway, {prompt.role, prompt.user, 0.0, std::nullopt});
  auto doc = extract_json_object(reply.text);
  if (!doc) throw GatewayError(GatewayFailure::protocol, "judge reply is not a JSON object");
  return *doc;
}

}  // namespace

bool GatewayPersistenceJudge::persists(std::string_view original, std::string_view corrupted,
                                       const HypothesisState& output) {
  std::vector<std::string> lines;
  for (const auto& f : output.fragments) lines.push_back(f.text);
  auto prompt = prompts_.render(prompt_names::judge_error_removal,
                                {{"original", std::string(original)},
                                 {"corrupted", std::string(corrupted)},
                                 {"output", join(lines, "\n")}});
  auto doc = judge_reply(gateway_, prompt);
  if (!doc.contains("error_present")) {
    throw GatewayError(GatewayFailure::protocol, "judge reply lacks error_present");
  }
  return as_flag(doc.at("error_present"));
}

bool judge_persistence(std::string_view original, std::string_view corrupted,
                       const HypothesisState& output, PersistenceJudge& judge) {
  return judge.persists(original, corrupted, output);
}

double persistence_rate(std::span<const JudgeVerdict> verdicts) {
  if (verdicts.empty()) throw Error(ErrorCode::undefined_metric, "no verdicts to aggregate");
  std::size_t persisted = 0;
  for (const auto& v : verdicts) {
    if (!v.persists) throw Error(ErrorCode::invalid_input, "verdict '" + v.item_id + "' has no persistence label");
    persisted += *v.persists ? 1 : 0;
  }
  return static_cast<double>(persisted) / static_cast<double>(verdicts.size());
}

double error_removal_rate(std::span<const JudgeVerdict> verdicts) {
  return 1.0 - persistence_rate(verdicts);
}

RecallAttributes RuleRecallJudge::judge(std::string_view reaction, const HypothesisState& hypothesis) {
  const std::string r = normalize_statement(reaction);
  if (r.empty()) return {};
  for (const auto& f : hypothesis.fragments) {
    if (normalize_statement(f.text).find(r) != std::string::npos) return {true, true, true, true};
  }
  return {};
}

RecallAttributes GatewayRecallJudge::judge(std::string_view reaction,
                                           const HypothesisState& hypothesis) {
  if (hypothesis.empty()) return {};
  auto prompt = prompts_.render(prompt_names::judge_pathway_recall,
                                {{"reaction", std::string(reaction)},
                                 {"hypothesis", render_hypothesis(hypothesis)}});
  auto doc = judge_reply(gateway_, prompt);
  RecallAttributes out;
  auto get = [&doc](const char* key) {
    if (!doc.contains(key)) throw GatewayError(GatewayFailure::protocol, std::string("judge reply lacks ") + key);
    return as_flag(doc.at(key));
  };
  out.input_entities = get("input_entities");
  out.output_entities = get("output_entities");
  out.directionality = get("directionality");
  out.reaction_type = get("reaction_type");
  return out;
}

DetailedRecall detailed_recall(std::span<const std::string> reference_reactions,
                               const HypothesisState& hypothesis, RecallJudge& judge) {
  if (reference_reactions.empty()) throw Error(ErrorCode::undefined_metric, "no reference reactions");
  DetailedRecall out;
  for (std::size_t i = 0; i < reference_reactions.size(); ++i) {
    RecallAttributes a;
    try {
      a = judge.judge(reference_reactions[i], hypothesis);
    } catch (const std::exception& e) {
      throw PartialJudgingError("judging reaction " + std::to_string(i) + " failed: " + e.what(), out.verdicts);
    }
    out.verdicts.push_back({"r" + std::to_string(i), std::nullopt, a});
  }
  const double n = static_cast<double>(out.verdicts.size());
  for (const auto& v : out.verdicts) {
    out.input_entities += v.attributes->input_entities ? 1.0 : 0.0;
    out.output_entities += v.attributes->output_entities ? 1.0 : 0.0;
    out.directionality += v.attributes->directionality ? 1.0 : 0.0;
    out.reaction_type += v.attributes->reaction_type ? 1.0 : 0.0;
  }
  out.input_entities /= n;
  out.output_entities /= n;
  out.directionality /= n;
  out.reaction_type /= n;
  return out;
}

std::size_t levenshtein_words(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double levenshtein_word_norm(std::string_view reference, std::string_view generated) {
  const auto ref = split_words(reference);
  if (ref.empty()) throw Error(ErrorCode::invalid_input, "reference text has no words");
  const auto gen = split_words(generated);
  return static_cast<double>(levenshtein_words(ref, gen)) / static_cast<double>(ref.size());
}

EntityDrift entity_drift(const HypothesisState& reference, const HypothesisState& generated,
                         const Lexicon& lexicon, std::optional<EntityKind> kind) {
  const Lexicon scoped = kind ? lexicon.restricted(*kind) : lexicon;
  const EntitySet ref = state_entities(reference, scoped);
  const EntitySet gen = state_entities(generated, scoped);
  EntityDrift out;
  for (const auto& e : gen) out.added += ref.count(e) ? 0 : 1;
  for (const auto& e : ref) out.removed += gen.count(e) ? 0 : 1;
  return out;
}

}  // namespace hypgame
