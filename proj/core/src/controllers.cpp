#include <sstream>

#include "hypgame/engine.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

namespace {

std::string move_description(const MoveRegistry& registry, const std::string& name) {
  if (name == moves::prune) return "remove component(s) from the hypothesis";
  if (name == moves::expand_corpus) return "search the literature corpus for evidence and integrate it";
  if (name == moves::expand_introspection) {
    return "gather information from prior knowledge and integrate it";
  }
  if (name == moves::debate) {
    return "claimsmiths argue distinct positions on a topic and a judge concludes; the hypothesis is not changed";
  }
  const MoveSpec* spec = registry.find(name);
  if (spec && spec->kind == MoveKind::composite) return "runs " + join(spec->components, " then ");
  return "custom move";
}

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string render_regions(const std::vector<Region>& regions) {
  if (regions.empty()) return "(the whole hypothesis)";
  std::ostringstream out;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    out << 'R' << (i + 1) << ": " << join({regions[i].fragment_ids.begin(), regions[i].fragment_ids.end()}, ", ");
    if (i + 1 < regions.size()) out << '\n';
  }
  return out.str();
}

std::set<std::string> id_list(const nlohmann::json& doc, const char* key) {
  std::set<std::string> out;
  if (!doc.contains(key) || !doc.at(key).is_array()) return out;
  for (const auto& v : doc.at(key)) {
    if (v.is_string()) out.insert(v.get<std::string>());
  }
  return out;
}

nlohmann::json ask(Gateway& gateway, const RenderedPrompt& prompt, double temperature, const char* what) {
  auto reply = complete_with_retry(gateway, {prompt.role, prompt.user, temperature, std::nullopt});
  if (reply.refusal) throw GatewayError(GatewayFailure::protocol, std::string(what) + " refused by model");
  auto doc = extract_json_object(reply.text);
  if (!doc) throw GatewayError(GatewayFailure::protocol, std::string(what) + " reply is not a JSON object");
  return *doc;
}

}  // namespace

// --- scripted ----------------------------------------------------------------

ScriptedController::ScriptedController(std::vector<ScriptedRound> plan, WhenExhausted when_exhausted)
    : plan_(std::move(plan)), when_exhausted_(when_exhausted) {}

void ScriptedController::begin(const GameConfig&) { next_ = 0; }

Diagnosis ScriptedController::diagnose(const RoundView&) {
  if (next_ >= plan_.size()) {
    return {"scripted plan complete", {}, when_exhausted_ == WhenExhausted::terminate};
  }
  const auto& step = plan_[next_];
  Diagnosis d;
  d.summary = step.summary.empty() ? "scripted round " + std::to_string(next_) : step.summary;
  d.terminate = step.terminate;
  if (!d.terminate) d.recommendations = step.requests;
  return d;
}

std::vector<MoveRequest> ScriptedController::select(const RoundView&, const Diagnosis&) {
  if (next_ >= plan_.size()) return {};
  return plan_[next_++].requests;
}

// --- policy ------------------------------------------------------------------

PolicyController::PolicyController(PolicyControllerOptions options) : options_(std::move(options)) {
  if (options_.moves_per_round < 1) throw Error(ErrorCode::invalid_input, "moves_per_round must be at least 1");
  options_.instructions.try_emplace(std::string(moves::prune), "Remove statements about {pathway} that are wrong or unsupported.");
  options_.instructions.try_emplace(std::string(moves::expand_corpus), "Find literature evidence on {pathway}.");
  options_.instructions.try_emplace(std::string(moves::expand_introspection), "Recall what is known about {pathway}.");
  options_.instructions.try_emplace(std::string(moves::debate), "Debate whether every statement about {pathway} is correct.");
}

void PolicyController::begin(const GameConfig& config) { rng_ = Rng::derive(config.seed, "policy"); }

Diagnosis PolicyController::diagnose(const RoundView& view) {
  Diagnosis d;
  d.summary = "policy round " + std::to_string(view.round) + " in mode " + view.config.mode.name;
  d.terminate = options_.terminate_after && view.round >= *options_.terminate_after;
  return d;
}

std::vector<MoveRequest> PolicyController::select(const RoundView& view, const Diagnosis&) {
  if (!rng_) rng_ = Rng::derive(view.config.seed, "policy");
  const std::size_t k = std::min(options_.moves_per_round, view.config.budget.k_max);
  std::vector<MoveRequest> out;
  for (const auto& name : sample_moves(view.config.mode, k, *rng_)) {
    MoveRequest req;
    req.move = name;
    auto it = options_.instructions.find(name);
    const std::string tmpl = it == options_.instructions.end() ? "Apply " + name + " to {pathway}." : it->second;
    req.instruction = replace_all(tmpl, "{pathway}", view.state.pathway_name);
    std::vector<std::string> scope;
    if (!view.regions.empty()) {
      const auto& region = view.regions[rng_->below(view.regions.size())];
      req.target_region = region.fragment_ids;
      scope.assign(region.fragment_ids.begin(), region.fragment_ids.end());
    } else {
      for (const auto& f : view.state.fragments) scope.push_back(f.id);
    }
    if (options_.random_prune_targets && name == moves::prune && view.state.size() > 1 && !scope.empty()) {
      req.targets.insert(scope[rng_->below(scope.size())]);
    }
    out.push_back(std::move(req));
  }
  return out;
}

// --- gateway -----------------------------------------------------------------

PromptVars GatewayController::common_vars(const RoundView& view) const {
  std::vector<std::string> moves_text;
  for (const auto& m : view.config.mode.allowed) {
    moves_text.push_back("- " + m + ": " + move_description(view.registry, m));
  }
  return {{"allowed_moves", join(moves_text, "\n")},
          {"mode_name", view.config.mode.name},
          {"mode_description", view.config.mode.description},
          {"k_max", std::to_string(view.config.budget.k_max)},
          {"task_goal", view.context.task_goal},
          {"priors", view.context.priors.empty() ? "(none)" : join(view.context.priors, "; ")},
          {"round", std::to_string(view.round + 1)},
          {"max_rounds", std::to_string(view.config.max_rounds)},
          {"hypothesis", render_hypothesis(view.state)},
          {"regions", render_regions(view.regions)}};
}

Diagnosis GatewayController::diagnose(const RoundView& view) {
  auto doc = ask(gateway_, prompts_.render(prompt_names::diagnose, common_vars(view)), temperature_, "diagnose");
  Diagnosis d;
  d.summary = doc.value("summary", "");
  if (doc.contains("terminate")) {
    const auto& t = doc.at("terminate");
    d.terminate = t.is_boolean() ? t.get<bool>() : (t.is_number() && t.get<double>() != 0.0);
  }
  if (!d.terminate && doc.contains("recommendations") && doc.at("recommendations").is_array()) {
    for (const auto& r : doc.at("recommendations")) {
      if (!r.is_object()) continue;
      MoveRequest req;
      req.move = r.value("move", "");
      req.instruction = r.value("instruction", "");
      req.targets = id_list(r, "target_ids");
      d.recommendations.push_back(std::move(req));
    }
  }
  return d;
}

std::vector<MoveRequest> GatewayController::select(const RoundView& view, const Diagnosis& diagnosis) {
  auto vars = common_vars(view);
  std::ostringstream diag;
  diag << diagnosis.summary;
  for (const auto& r : diagnosis.recommendations) {
    diag << "\n- " << r.move << ": " << r.instruction;
    if (!r.targets.empty()) diag << " [" << join({r.targets.begin(), r.targets.end()}, ", ") << ']';
  }
  vars["diagnosis"] = diag.str();
  auto doc = ask(gateway_, prompts_.render(prompt_names::move_selection, vars), temperature_, "move selection");
  std::vector<MoveRequest> out;
  if (!doc.contains("moves") || !doc.at("moves").is_array()) {
    throw GatewayError(GatewayFailure::protocol, "move selection reply lacks a \"moves\" array");
  }
  for (const auto& m : doc.at("moves")) {
    if (!m.is_object()) continue;
    MoveRequest req;
    req.move = m.value("move", "");
    req.instruction = m.value("instruction", "");
    auto region = id_list(m, "region");
    if (!region.empty()) req.target_region = std::move(region);
    req.targets = id_list(m, "targets");
    out.push_back(std::move(req));
  }
  return out;
}

}  // namespace hypgame
