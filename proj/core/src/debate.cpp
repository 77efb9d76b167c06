#include <cctype>
#include <future>
#include <set>
#include <sstream>

#include "hypgame/agents.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

namespace {

std::string render_transcript(const std::vector<DebateTurn>& transcript) {
  if (transcript.empty()) return "(no arguments yet)";
  std::ostringstream out;
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    const auto& t = transcript[i];
    out << "Claimsmith " << t.agent_index + 1 << " (" << t.stance << "): " << t.argument;
    if (i + 1 < transcript.size()) out << "\n\n";
  }
  return out.str();
}

std::vector<std::string> parse_positions(const std::string& text) {
  std::vector<std::string> positions;
  if (auto doc = extract_json_object(text); doc && doc->contains("positions") &&
                                            doc->at("positions").is_array()) {
    for (const auto& p : doc->at("positions")) {
      if (p.is_string()) positions.push_back(trim(p.get<std::string>()));
    }
    return positions;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    while (!t.empty() && (t.front() == '-' || t.front() == '*' || std::isdigit(static_cast<unsigned char>(t.front())) ||
                          t.front() == '.' || t.front() == ')')) {
      t.erase(t.begin());
    }
    t = trim(t);
    if (!t.empty()) positions.push_back(t);
  }
  return positions;
}

// Only ops that refer to fragments of `state` survive; the engine decides
// whether to act on them.
std::optional<DeltaSet> parse_recommended_delta(const nlohmann::json& doc,
                                                const HypothesisState& state) {
  if (!doc.contains("recommended_delta") || !doc.at("recommended_delta").is_object()) return std::nullopt;
  const auto& rd = doc.at("recommended_delta");
  if (!rd.contains("ops") || !rd.at("ops").is_array()) return std::nullopt;
  DeltaSet delta;
  std::set<std::string> seen;
  for (const auto& op : rd.at("ops")) {
    if (!op.is_object()) continue;
    const std::string kind = op.value("op", "");
    const std::string id = op.value("id", "");
    const Fragment* f = state.find(id);
    if (!f || seen.count(id)) continue;
    if (kind == "remove") {
      delta.ops.emplace_back(RemoveOp{id});
      seen.insert(id);
    } else if (kind == "replace" && op.contains("text") && op.at("text").is_string()) {
      Fragment revised = *f;
      revised.text = trim(op.at("text").get<std::string>());
      revised.kind = FragmentKind::claim;
      revised.triple.reset();
      if (revised.text.empty()) continue;
      revised.provenance.push_back({EvidenceSource::debate, std::nullopt, std::nullopt});
      delta.ops.emplace_back(ReplaceOp{id, std::move(revised)});
      seen.insert(id);
    }
  }
  if (delta.empty()) return std::nullopt;
  return delta;
}

}  // namespace

DebateOutcome run_debate(const HypothesisState& state, std::string_view topic,
                         const DebateOptions& options, Gateway& gateway,
                         const PromptLibrary& prompts) {
  if (options.n_claimsmiths < 2) throw Error(ErrorCode::invalid_input, "a debate needs at least two claimsmiths");
  if (options.n_turns < 1) throw Error(ErrorCode::invalid_input, "a debate needs at least one turn");
  if (trim(topic).empty()) throw Error(ErrorCode::invalid_input, "a debate needs a topic");

  DebateOutcome outcome;
  outcome.topic = trim(topic);
  const std::string hypothesis = render_hypothesis(state);

  auto setup = prompts.render(prompt_names::debate_setup,
                              {{"n_claimsmiths", std::to_string(options.n_claimsmiths)},
                               {"topic", outcome.topic},
                               {"hypothesis", hypothesis}});
  GatewayResponse setup_reply;
  try {
    setup_reply = complete_with_retry(gateway, {setup.role, setup.user, 0.0, std::nullopt});
  } catch (const GatewayError& e) {
    throw DebateError(std::string("debate setup failed: ") + e.what(), {});
  }
  std::vector<std::string> positions;
  std::set<std::string> distinct;
  for (auto& p : parse_positions(setup_reply.text)) {
    if (distinct.insert(normalize_statement(p)).second) positions.push_back(std::move(p));
  }
  if (positions.size() < options.n_claimsmiths) {
    throw DebateError("debate setup produced " + std::to_string(positions.size()) +
                          " distinct positions, need " + std::to_string(options.n_claimsmiths),
                      {});
  }
  positions.resize(options.n_claimsmiths);
  outcome.stances = positions;

  for (std::size_t turn = 0; turn < options.n_turns; ++turn) {
    const std::string transcript = render_transcript(outcome.transcript);
    std::vector<GatewayRequest> requests;
    for (std::size_t a = 0; a < options.n_claimsmiths; ++a) {
      auto p = prompts.render(prompt_names::claimsmith,
                              {{"agent_index", std::to_string(a + 1)},
                               {"stance", positions[a]},
                               {"topic", outcome.topic},
                               {"turn", std::to_string(turn + 1)},
                               {"hypothesis", hypothesis},
                               {"transcript", transcript}});
      requests.push_back({p.role, p.user, options.temperature, std::nullopt});
    }

    std::vector<std::optional<std::string>> arguments(requests.size());
    std::string failure;
    if (options.concurrent) {
      std::vector<std::future<GatewayResponse>> futures;
      for (const auto& r : requests) {
        futures.push_back(std::async(std::launch::async, [&gateway, r] { return complete_with_retry(gateway, r); }));
      }
      for (std::size_t a = 0; a < futures.size(); ++a) {
        try {
          arguments[a] = trim(futures[a].get().text);
        } catch (const std::exception& e) {
          if (failure.empty()) failure = e.what();
        }
      }
    } else {
      for (std::size_t a = 0; a < requests.size() && failure.empty(); ++a) {
        try {
          arguments[a] = trim(complete_with_retry(gateway, requests[a]).text);
        } catch (const std::exception& e) {
          failure = e.what();
        }
      }
    }
    for (std::size_t a = 0; a < arguments.size(); ++a) {
      if (arguments[a]) outcome.transcript.push_back({a, positions[a], *arguments[a]});
    }
    if (!failure.empty()) {
      throw DebateError("claimsmith call failed in turn " + std::to_string(turn + 1) + ": " + failure,
                        outcome.transcript);
    }
  }

  auto conclude = prompts.render(prompt_names::debate_conclude,
                                 {{"topic", outcome.topic},
                                  {"hypothesis", hypothesis},
                                  {"transcript", render_transcript(outcome.transcript)}});
  GatewayResponse reply;
  try {
    reply = complete_with_retry(gateway, {conclude.role, conclude.user, 0.0, std::nullopt});
  } catch (const GatewayError& e) {
    throw DebateError(std::string("debate conclusion failed: ") + e.what(), outcome.transcript);
  }
  if (auto doc = extract_json_object(reply.text); doc && doc->contains("conclusion") &&
                                                  doc->at("conclusion").is_string()) {
    outcome.conclusion = trim(doc->at("conclusion").get<std::string>());
    outcome.recommended_delta = parse_recommended_delta(*doc, state);
  } else {
    outcome.conclusion = trim(reply.text);
  }
  return outcome;
}

}  // namespace hypgame
