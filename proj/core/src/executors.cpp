#include <algorithm>

#include "hypgame/agents.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

namespace {

MoveOutcome unchanged(const HypothesisState& state, std::string note) {
  MoveOutcome out;
  out.state = state;
  out.log.push_back(std::move(note));
  return out;
}

}  // namespace

MoveOutcome PruneExecutor::execute(const HypothesisState& state, const MoveRequest& request,
                                   const Context& context) const {
  validate(request);
  if (!request.targets.empty()) {
    auto edit = prune(state, request.targets);
    MoveOutcome out{std::move(edit.state), std::move(edit.delta), {}, std::move(edit.violations), {}, {}};
    out.log.push_back("pruned " + join({request.targets.begin(), request.targets.end()}, ", "));
    return out;
  }
  if (!gateway_ || !prompts_) return unchanged(state, "prune without targets and without a model: nothing removed");

  auto prompt = prompts_->render(prompt_names::prune,
                                 {{"task_goal", context.task_goal},
                                  {"instruction", request.instruction},
                                  {"hypothesis", render_hypothesis(state, request.target_region)}});
  auto reply = complete_with_retry(*gateway_, {prompt.role, prompt.user, 0.0, std::nullopt});
  if (reply.refusal) return unchanged(state, "prune refused by model");
  auto doc = extract_json_object(reply.text);
  if (!doc || !doc->contains("remove") || !doc->at("remove").is_array()) {
    throw GatewayError(GatewayFailure::protocol, "prune reply lacks a \"remove\" array");
  }
  std::set<std::string> ids;
  std::vector<Violation> ignored;
  for (const auto& v : doc->at("remove")) {
    if (!v.is_string()) continue;
    auto id = v.get<std::string>();
    const bool in_scope = !request.target_region || request.target_region->count(id);
    if (state.find(id) && in_scope) {
      ids.insert(id);
    } else {
      ignored.push_back({"region", "model asked to remove '" + id + "' outside the editable region; ignored",
                         {id}, true});
    }
  }
  if (!ids.empty() && ids.size() == state.size()) {
    return unchanged(state, "model asked to remove every statement; ignored");
  }
  auto edit = prune(state, ids);
  MoveOutcome out{std::move(edit.state), std::move(edit.delta), {}, std::move(ignored), {}, {}};
  out.log.push_back("model pruned " + std::to_string(ids.size()) + " statement(s): " + doc->value("reason", ""));
  return out;
}

ExpandExecutor::ExpandExecutor(ExpandExecutorOptions options,
                               std::shared_ptr<const Integrator> integrator, const Corpus* corpus,
                               Gateway* gateway, const PromptLibrary* prompts)
    : options_(options),
      integrator_(std::move(integrator)),
      corpus_(corpus),
      gateway_(gateway),
      prompts_(prompts) {
  if (!integrator_) throw Error(ErrorCode::invalid_input, "expand executor needs an integrator");
  if (options_.channel == EvidenceChannel::corpus && !corpus_) {
    throw Error(ErrorCode::invalid_input, "corpus expansion needs a corpus");
  }
  if (options_.channel == EvidenceChannel::introspection && (!gateway_ || !prompts_)) {
    throw Error(ErrorCode::invalid_input, "introspective expansion needs a gateway");
  }
}

MoveOutcome ExpandExecutor::execute(const HypothesisState& state, const MoveRequest& request,
                                    const Context& context) const {
  validate(request);
  MoveOutcome out;
  std::string query = request.instruction;
  if (options_.rewrite_query && gateway_ && prompts_) {
    auto p = prompts_->render(prompt_names::retrieve_evidence,
                              {{"task_goal", context.task_goal},
                               {"instruction", request.instruction},
                               {"hypothesis", render_hypothesis(state)}});
    auto reply = complete_with_retry(*gateway_, {p.role, p.user, 0.0, std::nullopt});
    auto rewritten = trim(reply.text.substr(0, reply.text.find('\n')));
    if (!reply.refusal && !rewritten.empty()) {
      query = rewritten;
      out.log.push_back("query: " + query);
    }
  }

  if (options_.channel == EvidenceChannel::corpus) {
    out.evidence = retrieve_corpus(query, *corpus_, options_.top_k);
    if (out.evidence.empty()) {
      out.state = state;
      out.log.push_back("no corpus document matched the query");
      return out;
    }
  } else {
    out.evidence = retrieve_introspection(query, state, context, *gateway_, *prompts_, &out.log);
  }

  auto edit = expand(state, out.evidence, request.instruction, *integrator_, context, request.target_region);
  out.state = std::move(edit.state);
  out.delta = std::move(edit.delta);
  out.violations = std::move(edit.violations);
  return out;
}

MoveOutcome DebateExecutor::execute(const HypothesisState& state, const MoveRequest& request,
                                    const Context&) const {
  validate(request);
  auto debate = run_debate(state, request.instruction, options_, gateway_, prompts_);
  MoveOutcome out;
  out.state = state;
  out.evidence.push_back({{EvidenceSource::debate, std::nullopt, std::nullopt}, 1.0, debate.conclusion});
  out.log.push_back("debate concluded: " + debate.conclusion);
  out.debate = std::move(debate);
  return out;
}

ExecutorMap standard_executors(const AgentDeps& deps) {
  ExecutorMap map;
  std::shared_ptr<const Integrator> integrator = deps.integrator;
  if (!integrator) {
    if (deps.gateway && deps.prompts) {
      integrator = std::make_shared<GatewayIntegrator>(*deps.gateway, *deps.prompts);
    } else {
      integrator = std::make_shared<TemplateIntegrator>();
    }
  }
  if (deps.gateway && deps.prompts) {
    map.emplace(std::string(moves::prune), std::make_shared<PruneExecutor>(*deps.gateway, *deps.prompts));
  } else {
    map.emplace(std::string(moves::prune), std::make_shared<PruneExecutor>());
  }
  if (deps.corpus) {
    map.emplace(std::string(moves::expand_corpus),
                std::make_shared<ExpandExecutor>(
                    ExpandExecutorOptions{EvidenceChannel::corpus, deps.corpus_top_k, false}, integrator,
                    deps.corpus, deps.gateway, deps.prompts));
  }
  if (deps.gateway && deps.prompts) {
    map.emplace(std::string(moves::expand_introspection),
                std::make_shared<ExpandExecutor>(
                    ExpandExecutorOptions{EvidenceChannel::introspection, deps.corpus_top_k, false},
                    integrator, deps.corpus, deps.gateway, deps.prompts));
    map.emplace(std::string(moves::debate),
                std::make_shared<DebateExecutor>(*deps.gateway, *deps.prompts, deps.debate));
  }
  return map;
}

}  // namespace hypgame
