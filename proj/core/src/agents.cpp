#include "hypgame/agents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hypgame/text.hpp"

namespace hypgame {

void validate(const EvidenceRecord& record) {
  validate(record.ref);
  if (!(record.relevance >= 0.0 && record.relevance <= 1.0)) {
    throw Error(ErrorCode::invariant_violation, "evidence relevance outside [0, 1]");
  }
}

std::string render_hypothesis(const HypothesisState& state,
                              const std::optional<std::set<std::string>>& only) {
  std::ostringstream out;
  for (const auto& f : state.fragments) {
    if (only && !only->count(f.id)) continue;
    out << '[' << f.id << "] " << f.text << '\n';
  }
  std::string s = out.str();
  if (s.empty()) return "(empty)";
  s.pop_back();
  return s;
}

std::string render_evidence(std::span<const EvidenceRecord> evidence) {
  if (evidence.empty()) return "(none)";
  std::ostringstream out;
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    const auto& e = evidence[i];
    out << (i + 1) << ". ";
    if (e.ref.doc_id) out << '[' << *e.ref.doc_id << "] ";
    out << e.text;
    if (i + 1 < evidence.size()) out << '\n';
  }
  return out.str();
}

std::optional<nlohmann::json> extract_json_object(std::string_view text) {
  for (std::size_t open = text.find('{'); open != std::string_view::npos;
       open = text.find('{', open + 1)) {
    // Try the widest candidate first so nested objects parse whole.
    for (std::size_t close = text.rfind('}'); close != std::string_view::npos && close > open;
         close = text.rfind('}', close - 1)) {
      auto parsed = nlohmann::json::parse(text.substr(open, close - open + 1), nullptr, false);
      if (!parsed.is_discarded() && parsed.is_object()) return parsed;
      if (close == 0) break;
    }
  }
  return std::nullopt;
}

// --- prune -------------------------------------------------------------------

EditResult prune(const HypothesisState& state, const std::set<std::string>& ids) {
  for (const auto& id : ids) {
    if (!state.find(id)) throw Error(ErrorCode::unknown_id, "prune target " + id + " is not in the hypothesis");
  }
  if (!state.empty() && ids.size() == state.size()) {
    throw Error(ErrorCode::invalid_input, "prune would empty the hypothesis");
  }
  EditResult result{state, {}, {}};
  if (ids.empty()) return result;
  for (const auto& f : state.fragments) {
    if (ids.count(f.id)) result.delta.ops.emplace_back(RemoveOp{f.id});
  }
  result.state = apply_delta(state, result.delta);
  return result;
}

EditResult prune(const HypothesisState& state, const FragmentPredicate& predicate) {
  std::set<std::string> ids;
  for (const auto& f : state.fragments) {
    if (predicate(f)) ids.insert(f.id);
  }
  return prune(state, ids);
}

// --- retrieval ---------------------------------------------------------------

std::vector<EvidenceRecord> retrieve_corpus(std::string_view query, const Corpus& corpus,
                                            std::size_t k) {
  if (k < 1) throw Error(ErrorCode::invalid_input, "retrieve_corpus needs k >= 1");
  const auto q_tokens = tokenize(query);
  const std::unordered_set<std::string> q(q_tokens.begin(), q_tokens.end());
  if (q.empty()) return {};

  struct Scored {
    double score;
    const CorpusDocument* doc;
  };
  std::vector<Scored> scored;
  for (const auto& doc : corpus.documents) {
    const auto d_tokens = tokenize(doc.title + " " + doc.text);
    const std::unordered_set<std::string> d(d_tokens.begin(), d_tokens.end());
    if (d.empty()) continue;
    std::size_t overlap = 0;
    for (const auto& t : q) overlap += d.count(t);
    if (overlap == 0) continue;
    const double score = static_cast<double>(overlap) /
                         std::sqrt(static_cast<double>(q.size()) * static_cast<double>(d.size()));
    scored.push_back({score, &doc});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc->doc_id < b.doc->doc_id;
  });
  if (scored.size() > k) scored.resize(k);

  std::vector<EvidenceRecord> out;
  out.reserve(scored.size());
  for (const auto& s : scored) {
    EvidenceRecord rec;
    rec.ref = {EvidenceSource::corpus_doc, s.doc->doc_id,
               s.doc->title.empty() ? std::nullopt : std::optional<std::string>(s.doc->title)};
    rec.relevance = std::min(1.0, s.score);
    rec.text = s.doc->text;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<EvidenceRecord> retrieve_introspection(std::string_view query,
                                                   const HypothesisState& state,
                                                   const Context& context, Gateway& gateway,
                                                   const PromptLibrary& prompts,
                                                   std::vector<std::string>* log) {
  auto prompt = prompts.render(prompt_names::speculate_evidence,
                               {{"task_goal", context.task_goal},
                                {"instruction", std::string(query)},
                                {"hypothesis", render_hypothesis(state)}});
  auto response = complete_with_retry(gateway, {prompt.role, prompt.user, 0.0, std::nullopt});
  if (response.refusal || trim(response.text).empty()) {
    if (log) log->push_back("introspection refused for query: " + std::string(query));
    return {};
  }
  EvidenceRecord rec;
  rec.ref = {EvidenceSource::introspection, std::nullopt, std::nullopt};
  rec.relevance = 1.0;
  rec.text = trim(response.text);
  return {rec};
}

// --- expand ------------------------------------------------------------------

EditProposal TemplateIntegrator::propose(const IntegrationInput& input) const {
  EditProposal proposal;
  for (const auto& e : input.evidence) {
    auto text = trim(e.text);
    if (!text.empty()) proposal.additions.push_back({std::move(text), std::nullopt, std::nullopt});
  }
  return proposal;
}

EditProposal GatewayIntegrator::propose(const IntegrationInput& input) const {
  std::string region = "whole hypothesis";
  if (input.region) region = join({input.region->begin(), input.region->end()}, ", ");
  auto prompt = prompts_.render(prompt_names::expand,
                                {{"task_goal", input.context.task_goal},
                                 {"instruction", std::string(input.instruction)},
                                 {"region", region},
                                 {"hypothesis", render_hypothesis(input.state)},
                                 {"evidence", render_evidence(input.evidence)}});
  auto response = complete_with_retry(gateway_, {prompt.role, prompt.user, temperature_, std::nullopt});
  EditProposal proposal;
  if (response.refusal) return proposal;
  auto doc = extract_json_object(response.text);
  if (!doc) throw GatewayError(GatewayFailure::protocol, "expand reply is not a JSON object");
  for (const auto& a : doc->value("add", nlohmann::json::array())) {
    EditProposal::Addition add;
    add.text = a.value("text", "");
    if (a.contains("after") && a.at("after").is_string()) add.after_id = a.at("after").get<std::string>();
    proposal.additions.push_back(std::move(add));
  }
  for (const auto& r : doc->value("replace", nlohmann::json::array())) {
    proposal.revisions.push_back({r.value("id", ""), r.value("text", "")});
  }
  return proposal;
}

namespace {

void add_citations(std::vector<EvidenceRef>& provenance, const std::vector<EvidenceRef>& refs) {
  for (const auto& r : refs) {
    if (std::find(provenance.begin(), provenance.end(), r) == provenance.end()) provenance.push_back(r);
  }
}

}  // namespace

EditResult expand(const HypothesisState& state, std::span<const EvidenceRecord> evidence,
                  std::string_view instruction, const Integrator& integrator,
                  const Context& context, const std::optional<std::set<std::string>>& region) {
  if (trim(instruction).empty()) throw Error(ErrorCode::invalid_input, "expand needs an instruction");
  const EditProposal proposal =
      integrator.propose({state, evidence, instruction, context, region});

  std::vector<EvidenceRef> citations;
  for (const auto& e : evidence) add_citations(citations, {e.ref});
  if (citations.empty()) citations.push_back({EvidenceSource::introspection, std::nullopt, std::nullopt});

  EditResult result{state, {}, {}};
  std::unordered_map<std::string, std::string> text_owner;  // normalized text -> id
  for (const auto& f : state.fragments) text_owner.emplace(normalize_statement(f.text), f.id);
  std::set<std::string> touched;

  for (const auto& rev : proposal.revisions) {
    const Fragment* f = state.find(rev.fragment_id);
    if (!f) {
      result.violations.push_back({"unknown", "revision of unknown fragment '" + rev.fragment_id + "' dropped",
                                   {rev.fragment_id}, true});
      continue;
    }
    const std::string norm = normalize_statement(rev.text);
    const std::string old_norm = normalize_statement(f->text);
    if (norm.empty() || norm == old_norm || touched.count(f->id)) continue;
    if (auto it = text_owner.find(norm); it != text_owner.end()) {
      result.violations.push_back({"duplicate",
                                   "revision of " + f->id + " duplicates " + it->second + "; dropped",
                                   {it->second, f->id}, true});
      continue;
    }
    Fragment revised = *f;
    revised.text = trim(rev.text);
    if (revised.kind == FragmentKind::triple) {
      revised.kind = FragmentKind::claim;
      revised.triple.reset();
    }
    add_citations(revised.provenance, citations);
    text_owner.erase(old_norm);
    text_owner.emplace(norm, f->id);
    touched.insert(f->id);
    result.delta.ops.emplace_back(ReplaceOp{f->id, std::move(revised)});
  }

  // Simulated list of (id, step_index) so insert positions match sequential application.
  std::vector<std::pair<std::string, std::uint64_t>> sim;
  for (const auto& f : state.fragments) sim.emplace_back(f.id, f.step_index);
  std::set<std::string> reserved;
  std::set<std::string> added;

  for (const auto& add : proposal.additions) {
    const std::string norm = normalize_statement(add.text);
    if (norm.empty()) continue;
    if (auto it = text_owner.find(norm); it != text_owner.end()) {
      result.violations.push_back({"duplicate", "addition duplicates " + it->second + "; dropped",
                                   {it->second}, true});
      continue;
    }
    std::size_t position = sim.size();
    bool anchored = false;
    if (add.after_id) {
      for (std::size_t i = 0; i < sim.size(); ++i) {
        if (sim[i].first == *add.after_id) {
          position = i + 1;
          anchored = true;
          break;
        }
      }
      if (!anchored) {
        result.violations.push_back({"unknown", "addition anchored to unknown fragment '" + *add.after_id +
                                                    "'; placed by default rule",
                                     {*add.after_id}, true});
      }
    }
    if (!anchored && region && !region->empty()) {
      for (std::size_t i = sim.size(); i-- > 0;) {
        if (region->count(sim[i].first) || added.count(sim[i].first)) {
          position = i + 1;
          break;
        }
      }
    }
    Fragment f;
    f.id = fresh_fragment_id(state, add.text, reserved);
    f.text = trim(add.text);
    if (add.triple) {
      f.kind = FragmentKind::triple;
      f.triple = add.triple;
    }
    f.provenance = citations;
    f.step_index = position > 0 ? sim[position - 1].second + 1 : 0;
    reserved.insert(f.id);
    added.insert(f.id);
    touched.insert(f.id);
    text_owner.emplace(norm, f.id);
    sim.insert(sim.begin() + static_cast<std::ptrdiff_t>(position), {f.id, f.step_index});
    for (std::size_t i = position + 1; i < sim.size(); ++i) {
      if (sim[i].second <= sim[i - 1].second) sim[i].second = sim[i - 1].second + 1;
    }
    result.delta.ops.emplace_back(AddOp{std::move(f), position});
  }

  if (result.delta.empty()) return result;
  HypothesisState applied = apply_delta(state, result.delta);
  auto consistency = enforce_consistency(applied, touched);
  result.violations.insert(result.violations.end(), consistency.violations.begin(),
                           consistency.violations.end());
  if (!(consistency.state == applied)) result.delta = diff_states(state, consistency.state);
  result.state = std::move(consistency.state);
  return result;
}

}  // namespace hypgame
