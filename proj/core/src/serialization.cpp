#include "hypgame/serialization.hpp"

#include <array>
#include <utility>

namespace hypgame {

using nlohmann::json;

namespace {

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get_opt(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

template <class T>
void get_or(const json& j, const char* key, T& v) {
  if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<T>();
}

template <class E, std::size_t N>
const char* name_of(const std::array<std::pair<E, const char*>, N>& table, E v) noexcept {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

template <class E, std::size_t N>
E value_of(const std::array<std::pair<E, const char*>, N>& table, std::string_view name,
           const char* what) {
  for (const auto& [value, n] : table) {
    if (name == n) return value;
  }
  throw Error(ErrorCode::invalid_input, "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

constexpr std::array<std::pair<FragmentKind, const char*>, 2> kFragmentKind{
    {{FragmentKind::claim, "claim"}, {FragmentKind::triple, "triple"}}};
constexpr std::array<std::pair<EvidenceSource, const char*>, 4> kEvidenceSource{
    {{EvidenceSource::corpus_doc, "corpus_doc"},
     {EvidenceSource::introspection, "introspection"},
     {EvidenceSource::debate, "debate"},
     {EvidenceSource::seed_input, "seed_input"}}};
constexpr std::array<std::pair<MoveKind, const char*>, 2> kMoveKind{
    {{MoveKind::atomic, "atomic"}, {MoveKind::composite, "composite"}}};
constexpr std::array<std::pair<DocumentKind, const char*>, 2> kDocumentKind{
    {{DocumentKind::abstract, "abstract"}, {DocumentKind::fulltext, "fulltext"}}};
constexpr std::array<std::pair<EntityKind, const char*>, 4> kEntityKind{
    {{EntityKind::gene, "gene"},
     {EntityKind::complex, "complex"},
     {EntityKind::family, "family"},
     {EntityKind::chemical, "chemical"}}};
constexpr std::array<std::pair<ErrorType, const char*>, 3> kErrorType{
    {{ErrorType::wrong_entity, "wrong_entity"},
     {ErrorType::wrong_relation, "wrong_relation"},
     {ErrorType::unsupported_step, "unsupported_step"}}};
constexpr std::array<std::pair<Difficulty, const char*>, 2> kDifficulty{
    {{Difficulty::L1, "L1"}, {Difficulty::L2, "L2"}}};
constexpr std::array<std::pair<CorruptionOperation, const char*>, 2> kOperation{
    {{CorruptionOperation::replace, "replace"}, {CorruptionOperation::insert, "insert"}}};
constexpr std::array<std::pair<GameVariant, const char*>, 2> kVariant{
    {{GameVariant::simple, "simple"}, {GameVariant::localized, "localized"}}};
constexpr std::array<std::pair<TerminationReason, const char*>, 3> kTermination{
    {{TerminationReason::controller, "controller"},
     {TerminationReason::max_rounds, "max_rounds"},
     {TerminationReason::stalled, "stalled"}}};
constexpr std::array<std::pair<TaskKind, const char*>, 2> kTask{
    {{TaskKind::corruption, "corruption"}, {TaskKind::reconstruction, "reconstruction"}}};
constexpr std::array<std::pair<Method, const char*>, 4> kMethod{
    {{Method::hypothesis_game, "hypothesis_game"},
     {Method::zero_shot, "zero_shot"},
     {Method::chain_of_thought, "chain_of_thought"},
     {Method::react, "react"}}};
constexpr std::array<std::pair<ControllerKind, const char*>, 3> kController{
    {{ControllerKind::scripted, "scripted"},
     {ControllerKind::policy, "policy"},
     {ControllerKind::gateway, "gateway"}}};
constexpr std::array<std::pair<SelectorKind, const char*>, 4> kSelector{
    {{SelectorKind::whole_state, "whole_state"},
     {SelectorKind::per_fragment, "per_fragment"},
     {SelectorKind::sliding_window, "sliding_window"},
     {SelectorKind::entity_mention, "entity_mention"}}};
constexpr std::array<std::pair<GatewayKind, const char*>, 3> kGateway{
    {{GatewayKind::none, "none"}, {GatewayKind::mock, "mock"}, {GatewayKind::http, "http"}}};
constexpr std::array<std::pair<JudgeKind, const char*>, 2> kJudge{
    {{JudgeKind::rule, "rule"}, {JudgeKind::gateway, "gateway"}}};
constexpr std::array<std::pair<RunStatus, const char*>, 3> kRunStatus{
    {{RunStatus::completed, "completed"}, {RunStatus::failed, "failed"}, {RunStatus::skipped, "skipped"}}};

}  // namespace

#define HYPGAME_ENUM(T, table, what)                                                    \
  const char* to_string(T v) noexcept { return name_of(table, v); }                     \
  template <>                                                                           \
  T parse_enum<T>(std::string_view name) {                                              \
    return value_of(table, name, what);                                                 \
  }                                                                                     \
  void to_json(json& j, const T& v) { j = to_string(v); }                               \
  void from_json(const json& j, T& v) { v = parse_enum<T>(j.get<std::string>()); }

HYPGAME_ENUM(FragmentKind, kFragmentKind, "fragment kind")
HYPGAME_ENUM(EvidenceSource, kEvidenceSource, "evidence source")
HYPGAME_ENUM(MoveKind, kMoveKind, "move kind")
HYPGAME_ENUM(DocumentKind, kDocumentKind, "document kind")
HYPGAME_ENUM(EntityKind, kEntityKind, "entity kind")
HYPGAME_ENUM(ErrorType, kErrorType, "error type")
HYPGAME_ENUM(Difficulty, kDifficulty, "difficulty")
HYPGAME_ENUM(CorruptionOperation, kOperation, "corruption operation")
HYPGAME_ENUM(GameVariant, kVariant, "game variant")
HYPGAME_ENUM(TerminationReason, kTermination, "termination reason")
HYPGAME_ENUM(TaskKind, kTask, "task")
HYPGAME_ENUM(Method, kMethod, "method")
HYPGAME_ENUM(ControllerKind, kController, "controller kind")
HYPGAME_ENUM(SelectorKind, kSelector, "selector kind")
HYPGAME_ENUM(GatewayKind, kGateway, "gateway kind")
HYPGAME_ENUM(JudgeKind, kJudge, "judge kind")
HYPGAME_ENUM(RunStatus, kRunStatus, "run status")

#undef HYPGAME_ENUM

// --- hypothesis --------------------------------------------------------------

void to_json(json& j, const EvidenceRef& v) {
  j = json{{"source", v.source}};
  put_opt(j, "doc_id", v.doc_id);
  put_opt(j, "snippet", v.snippet);
}
void from_json(const json& j, EvidenceRef& v) {
  v.source = j.at("source").get<EvidenceSource>();
  get_opt(j, "doc_id", v.doc_id);
  get_opt(j, "snippet", v.snippet);
}

void to_json(json& j, const Fragment& v) {
  j = json{{"id", v.id}, {"kind", v.kind}, {"text", v.text}, {"provenance", v.provenance},
           {"step_index", v.step_index}};
  if (v.triple) {
    j["subject"] = v.triple->subject;
    j["relation"] = v.triple->relation;
    j["object"] = v.triple->object;
  }
}
void from_json(const json& j, Fragment& v) {
  v.id = j.at("id").get<std::string>();
  v.kind = j.value("kind", FragmentKind::claim);
  v.text = j.at("text").get<std::string>();
  v.triple.reset();
  if (j.contains("subject") || j.contains("relation") || j.contains("object")) {
    v.triple = Triple{j.value("subject", ""), j.value("relation", ""), j.value("object", "")};
  }
  v.provenance = j.value("provenance", std::vector<EvidenceRef>{});
  v.step_index = j.value("step_index", std::uint64_t{0});
}

void to_json(json& j, const HypothesisState& v) {
  j = json{{"pathway_id", v.pathway_id},
           {"pathway_name", v.pathway_name},
           {"fragments", v.fragments},
           {"round", v.round}};
}
void from_json(const json& j, HypothesisState& v) {
  v.pathway_name = j.at("pathway_name").get<std::string>();
  v.pathway_id = j.value("pathway_id", v.pathway_name);
  v.fragments = j.at("fragments").get<std::vector<Fragment>>();
  v.round = j.value("round", std::uint64_t{0});
}

void to_json(json& j, const Context& v) {
  j = json{{"task_goal", v.task_goal}, {"priors", v.priors}};
  put_opt(j, "corpus_ref", v.corpus_ref);
}
void from_json(const json& j, Context& v) {
  v.task_goal = j.at("task_goal").get<std::string>();
  v.priors = j.value("priors", std::vector<std::string>{});
  get_opt(j, "corpus_ref", v.corpus_ref);
}

void to_json(json& j, const DeltaOp& v) {
  std::visit(
      [&j](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, AddOp>) {
          j = json{{"op", "add"}, {"fragment", op.fragment}, {"position", op.position}};
        } else if constexpr (std::is_same_v<T, RemoveOp>) {
          j = json{{"op", "remove"}, {"id", op.fragment_id}};
        } else {
          j = json{{"op", "replace"}, {"id", op.fragment_id}, {"fragment", op.fragment}};
        }
      },
      v);
}
void from_json(const json& j, DeltaOp& v) {
  const auto op = j.at("op").get<std::string>();
  if (op == "add") {
    v = AddOp{j.at("fragment").get<Fragment>(), j.at("position").get<std::size_t>()};
  } else if (op == "remove") {
    v = RemoveOp{j.at("id").get<std::string>()};
  } else if (op == "replace") {
    v = ReplaceOp{j.at("id").get<std::string>(), j.at("fragment").get<Fragment>()};
  } else {
    throw Error(ErrorCode::invalid_input, "unknown delta op '" + op + "'");
  }
}

void to_json(json& j, const DeltaSet& v) { j = json{{"ops", v.ops}}; }
void from_json(const json& j, DeltaSet& v) { v.ops = j.at("ops").get<std::vector<DeltaOp>>(); }

void to_json(json& j, const PathwayRecord& v) {
  j = json{{"name", v.name}, {"steps", v.steps}};
  put_opt(j, "id", v.id);
}
void from_json(const json& j, PathwayRecord& v) {
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw InputError("pathway record has no name");
  }
  v.name = j.at("name").get<std::string>();
  v.steps = j.value("steps", std::vector<std::string>{});
  get_opt(j, "id", v.id);
}

void to_json(json& j, const Violation& v) {
  j = json{{"kind", v.kind}, {"message", v.message}, {"fragment_ids", v.fragment_ids},
           {"repaired", v.repaired}};
}
void from_json(const json& j, Violation& v) {
  v.kind = j.at("kind").get<std::string>();
  v.message = j.value("message", "");
  v.fragment_ids = j.value("fragment_ids", std::vector<std::string>{});
  v.repaired = j.value("repaired", false);
}

// --- moves -------------------------------------------------------------------

void to_json(json& j, const MoveSpec& v) {
  j = json{{"name", v.name}, {"kind", v.kind}, {"components", v.components}};
}
void from_json(const json& j, MoveSpec& v) {
  v.name = j.at("name").get<std::string>();
  v.kind = j.value("kind", MoveKind::atomic);
  v.components = j.value("components", std::vector<std::string>{});
}

void to_json(json& j, const MoveRequest& v) {
  j = json{{"move", v.move}, {"instruction", v.instruction}};
  put_opt(j, "target_region", v.target_region);
  if (!v.targets.empty()) j["targets"] = v.targets;
}
void from_json(const json& j, MoveRequest& v) {
  v.move = j.at("move").get<std::string>();
  v.instruction = j.value("instruction", "");
  get_opt(j, "target_region", v.target_region);
  v.targets = j.value("targets", std::set<std::string>{});
}

void to_json(json& j, const MoveBudget& v) { j = json{{"k_max", v.k_max}}; }
void from_json(const json& j, MoveBudget& v) { v.k_max = j.at("k_max").get<std::size_t>(); }

void to_json(json& j, const MoveRegistry& v) { j = json{{"moves", v.specs()}}; }
void from_json(const json& j, MoveRegistry& v) {
  MoveRegistry registry;
  for (const auto& m : j.at("moves")) registry = register_move(std::move(registry), m.get<MoveSpec>());
  v = std::move(registry);
}

// --- gateway / corpus --------------------------------------------------------

void to_json(json& j, const GatewayRequest& v) {
  j = json{{"role_prompt", v.role_prompt},
           {"user_prompt", v.user_prompt},
           {"temperature", v.temperature},
           {"seed_hint", nullptr}};
  if (v.seed_hint) j["seed_hint"] = *v.seed_hint;
}
void from_json(const json& j, GatewayRequest& v) {
  v.role_prompt = j.at("role_prompt").get<std::string>();
  v.user_prompt = j.at("user_prompt").get<std::string>();
  v.temperature = j.value("temperature", 0.0);
  get_opt(j, "seed_hint", v.seed_hint);
}

void to_json(json& j, const TokenUsage& v) {
  j = json{{"prompt_tokens", v.prompt_tokens}, {"completion_tokens", v.completion_tokens}};
}
void from_json(const json& j, TokenUsage& v) {
  v.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
  v.completion_tokens = j.value("completion_tokens", std::int64_t{0});
}

void to_json(json& j, const GatewayResponse& v) {
  j = json{{"text", v.text}, {"refusal", v.refusal}};
  put_opt(j, "usage", v.usage);
}
void from_json(const json& j, GatewayResponse& v) {
  v.text = j.at("text").get<std::string>();
  v.refusal = j.value("refusal", false);
  get_opt(j, "usage", v.usage);
}

void to_json(json& j, const CorpusDocument& v) {
  j = json{{"doc_id", v.doc_id}, {"title", v.title}, {"text", v.text}, {"kind", v.kind}};
}
void from_json(const json& j, CorpusDocument& v) {
  v.doc_id = j.at("doc_id").get<std::string>();
  v.title = j.value("title", "");
  v.text = j.at("text").get<std::string>();
  v.kind = j.value("kind", DocumentKind::abstract);
}

// --- agents ------------------------------------------------------------------

void to_json(json& j, const EvidenceRecord& v) {
  j = json{{"ref", v.ref}, {"relevance", v.relevance}, {"text", v.text}};
}
void from_json(const json& j, EvidenceRecord& v) {
  v.ref = j.at("ref").get<EvidenceRef>();
  v.relevance = j.at("relevance").get<double>();
  v.text = j.value("text", "");
}

void to_json(json& j, const DebateTurn& v) {
  j = json{{"agent_index", v.agent_index}, {"stance", v.stance}, {"argument", v.argument}};
}
void from_json(const json& j, DebateTurn& v) {
  v.agent_index = j.at("agent_index").get<std::size_t>();
  v.stance = j.value("stance", "");
  v.argument = j.value("argument", "");
}

void to_json(json& j, const DebateOutcome& v) {
  j = json{{"topic", v.topic},
           {"stances", v.stances},
           {"transcript", v.transcript},
           {"conclusion", v.conclusion}};
  put_opt(j, "recommended_delta", v.recommended_delta);
}
void from_json(const json& j, DebateOutcome& v) {
  v.topic = j.at("topic").get<std::string>();
  v.stances = j.value("stances", std::vector<std::string>{});
  v.transcript = j.value("transcript", std::vector<DebateTurn>{});
  v.conclusion = j.value("conclusion", "");
  get_opt(j, "recommended_delta", v.recommended_delta);
}

// --- engine ------------------------------------------------------------------

void to_json(json& j, const ScoreVector& v) {
  j = json{{"d_known", v.d_known},
           {"delta_div", v.delta_div},
           {"l_connect", v.l_connect},
           {"t_frag", v.t_frag}};
}
void from_json(const json& j, ScoreVector& v) {
  v.d_known = j.at("d_known").get<double>();
  v.delta_div = j.at("delta_div").get<double>();
  v.l_connect = j.at("l_connect").get<double>();
  v.t_frag = j.at("t_frag").get<double>();
}

void to_json(json& j, const Mode& v) {
  j = json{{"name", v.name}, {"description", v.description}, {"allowed", v.allowed},
           {"weights", v.weights}};
}
void from_json(const json& j, Mode& v) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "discovery") {
      v = Mode::discovery();
    } else if (name == "validation") {
      v = Mode::validation();
    } else {
      throw Error(ErrorCode::invalid_input, "unknown preset mode '" + name + "'");
    }
    return;
  }
  v.name = j.at("name").get<std::string>();
  v.description = j.value("description", "");
  v.allowed = j.at("allowed").get<std::vector<std::string>>();
  v.weights = j.value("weights", std::map<std::string, double>{});
}

void to_json(json& j, const GameConfig& v) {
  j = json{{"mode", v.mode},         {"budget", v.budget},   {"max_rounds", v.max_rounds},
           {"seed", v.seed},         {"variant", v.variant}, {"task_goal", v.task_goal}};
}
void from_json(const json& j, GameConfig& v) {
  get_or(j, "mode", v.mode);
  get_or(j, "budget", v.budget);
  if (j.contains("k_max")) v.budget.k_max = j.at("k_max").get<std::size_t>();
  get_or(j, "max_rounds", v.max_rounds);
  get_or(j, "seed", v.seed);
  get_or(j, "variant", v.variant);
  get_or(j, "task_goal", v.task_goal);
}

void to_json(json& j, const Diagnosis& v) {
  j = json{{"summary", v.summary}, {"recommendations", v.recommendations}, {"terminate", v.terminate}};
}
void from_json(const json& j, Diagnosis& v) {
  v.summary = j.value("summary", "");
  v.recommendations = j.value("recommendations", std::vector<MoveRequest>{});
  v.terminate = j.value("terminate", false);
}

void to_json(json& j, const Region& v) { j = v.fragment_ids; }
void from_json(const json& j, Region& v) { v.fragment_ids = j.get<std::set<std::string>>(); }

void to_json(json& j, const AppliedMove& v) {
  j = json{{"request", v.request}, {"delta", v.delta},   {"evidence", v.evidence},
           {"violations", v.violations}, {"log", v.log}};
  put_opt(j, "debate", v.debate);
}
void from_json(const json& j, AppliedMove& v) {
  v.request = j.at("request").get<MoveRequest>();
  v.delta = j.at("delta").get<DeltaSet>();
  v.evidence = j.value("evidence", std::vector<EvidenceRecord>{});
  v.violations = j.value("violations", std::vector<Violation>{});
  v.log = j.value("log", std::vector<std::string>{});
  get_opt(j, "debate", v.debate);
}

void to_json(json& j, const RoundRecord& v) {
  j = json{{"round", v.index},          {"diagnosis", v.diagnosis}, {"regions", v.regions},
           {"requested", v.requested},  {"applied", v.applied},     {"violations", v.violations},
           {"rolled_back", v.rolled_back}, {"digest", v.state_digest}};
  put_opt(j, "error", v.error);
  put_opt(j, "scores", v.scores);
}
void from_json(const json& j, RoundRecord& v) {
  v.index = j.at("round").get<std::size_t>();
  v.diagnosis = j.at("diagnosis").get<Diagnosis>();
  v.regions = j.value("regions", std::vector<Region>{});
  v.requested = j.value("requested", std::vector<MoveRequest>{});
  v.applied = j.value("applied", std::vector<AppliedMove>{});
  v.violations = j.value("violations", std::vector<Violation>{});
  v.rolled_back = j.value("rolled_back", false);
  v.state_digest = j.value("digest", "");
  get_opt(j, "error", v.error);
  get_opt(j, "scores", v.scores);
}

void to_json(json& j, const ScriptedRound& v) {
  j = json{{"requests", v.requests}, {"terminate", v.terminate}, {"summary", v.summary}};
}
void from_json(const json& j, ScriptedRound& v) {
  v.requests = j.value("requests", std::vector<MoveRequest>{});
  v.terminate = j.value("terminate", false);
  v.summary = j.value("summary", "");
}

void to_json(json& j, const PolicyControllerOptions& v) {
  j = json{{"moves_per_round", v.moves_per_round},
           {"instructions", v.instructions},
           {"random_prune_targets", v.random_prune_targets}};
  put_opt(j, "terminate_after", v.terminate_after);
}
void from_json(const json& j, PolicyControllerOptions& v) {
  get_or(j, "moves_per_round", v.moves_per_round);
  get_or(j, "instructions", v.instructions);
  get_or(j, "random_prune_targets", v.random_prune_targets);
  get_opt(j, "terminate_after", v.terminate_after);
}

// --- evaluation --------------------------------------------------------------

void to_json(json& j, const LexiconEntry& v) {
  j = json{{"surface", v.surface}, {"canonical", v.canonical}, {"kind", v.kind}};
}
void from_json(const json& j, LexiconEntry& v) {
  v.surface = j.at("surface").get<std::string>();
  v.canonical = j.value("canonical", v.surface);
  v.kind = j.value("kind", EntityKind::gene);
}

void to_json(json& j, const PRF& v) {
  j = json{{"precision", v.precision}, {"recall", v.recall}, {"f1", v.f1}};
}
void from_json(const json& j, PRF& v) {
  v.precision = j.at("precision").get<double>();
  v.recall = j.at("recall").get<double>();
  v.f1 = j.at("f1").get<double>();
}

void to_json(json& j, const RecallAttributes& v) {
  j = json{{"input_entities", v.input_entities ? 1 : 0},
           {"output_entities", v.output_entities ? 1 : 0},
           {"directionality", v.directionality ? 1 : 0},
           {"reaction_type", v.reaction_type ? 1 : 0}};
}
void from_json(const json& j, RecallAttributes& v) {
  auto flag = [&j](const char* key) {
    const auto& x = j.at(key);
    if (x.is_boolean()) return x.get<bool>();
    if (x.is_number()) return x.get<double>() != 0.0;
    throw Error(ErrorCode::invalid_input, std::string("attribute '") + key + "' is not 0/1");
  };
  v.input_entities = flag("input_entities");
  v.output_entities = flag("output_entities");
  v.directionality = flag("directionality");
  v.reaction_type = flag("reaction_type");
}

void to_json(json& j, const JudgeVerdict& v) {
  j = json{{"item_id", v.item_id}};
  put_opt(j, "persists", v.persists);
  put_opt(j, "attributes", v.attributes);
}
void from_json(const json& j, JudgeVerdict& v) {
  v.item_id = j.at("item_id").get<std::string>();
  get_opt(j, "persists", v.persists);
  get_opt(j, "attributes", v.attributes);
}

void to_json(json& j, const EntityDrift& v) { j = json{{"added", v.added}, {"removed", v.removed}}; }
void from_json(const json& j, EntityDrift& v) {
  v.added = j.at("added").get<std::size_t>();
  v.removed = j.at("removed").get<std::size_t>();
}

// --- corruption --------------------------------------------------------------

void to_json(json& j, const CorruptionEntry& v) {
  j = json{{"pathway_id", v.pathway_id}, {"anchor_index", v.anchor_index},
           {"error_type", v.error_type}, {"difficulty", v.difficulty},
           {"operation", v.operation},   {"original", v.original},
           {"corrupted", v.corrupted}};
}
void from_json(const json& j, CorruptionEntry& v) {
  v.pathway_id = j.at("pathway_id").get<std::string>();
  v.anchor_index = j.at("anchor_index").get<std::size_t>();
  v.error_type = j.at("error_type").get<ErrorType>();
  v.difficulty = j.at("difficulty").get<Difficulty>();
  v.operation = j.at("operation").get<CorruptionOperation>();
  v.original = j.value("original", "");
  v.corrupted = j.at("corrupted").get<std::string>();
}

void to_json(json& j, const CorruptionPolicy& v) {
  j = json{{"error_type", v.error_type ? json(*v.error_type) : json("mixed")},
           {"difficulty", v.difficulty},
           {"fraction", v.fraction},
           {"seed", v.seed},
           {"max_fraction", v.max_fraction}};
}
void from_json(const json& j, CorruptionPolicy& v) {
  const auto type = j.value("error_type", std::string("mixed"));
  v.error_type.reset();
  if (type != "mixed") v.error_type = parse_enum<ErrorType>(type);
  v.difficulty = j.at("difficulty").get<Difficulty>();
  v.fraction = j.at("fraction").get<double>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.max_fraction = j.value("max_fraction", 0.4);
}

void to_json(json& j, const AppliedCorruption& v) {
  j = json{{"anchor_index", v.anchor_index}, {"operation", v.operation},
           {"error_type", v.error_type},     {"difficulty", v.difficulty},
           {"original", v.original},         {"corrupted", v.corrupted},
           {"fragment_id", v.fragment_id},   {"position", v.position}};
}
void from_json(const json& j, AppliedCorruption& v) {
  v.anchor_index = j.at("anchor_index").get<std::size_t>();
  v.operation = j.at("operation").get<CorruptionOperation>();
  v.error_type = j.at("error_type").get<ErrorType>();
  v.difficulty = j.at("difficulty").get<Difficulty>();
  v.original = j.value("original", "");
  v.corrupted = j.at("corrupted").get<std::string>();
  v.fragment_id = j.at("fragment_id").get<std::string>();
  v.position = j.at("position").get<std::size_t>();
}

void to_json(json& j, const CorruptionPlan& v) {
  j = json{{"policy", v.policy}, {"selections", v.selections}, {"applied", v.applied}};
}
void from_json(const json& j, CorruptionPlan& v) {
  v.policy = j.at("policy").get<CorruptionPolicy>();
  v.selections = j.at("selections").get<std::vector<CorruptionEntry>>();
  v.applied = j.value("applied", std::vector<AppliedCorruption>{});
}

// --- experiment --------------------------------------------------------------

void to_json(json& j, const ControllerSpec& v) {
  j = json{{"kind", v.kind}, {"plans", v.plans}, {"policy", v.policy}};
}
void from_json(const json& j, ControllerSpec& v) {
  v.kind = j.at("kind").get<ControllerKind>();
  get_or(j, "plans", v.plans);
  get_or(j, "policy", v.policy);
}

void to_json(json& j, const SelectorSpec& v) {
  j = json{{"kind", v.kind}, {"width", v.width}, {"stride", v.stride}};
}
void from_json(const json& j, SelectorSpec& v) {
  v.kind = j.at("kind").get<SelectorKind>();
  get_or(j, "width", v.width);
  get_or(j, "stride", v.stride);
}

void to_json(json& j, const ExperimentSpec& v) {
  j = json{{"name", v.name},
           {"task", v.task},
           {"method", v.method},
           {"controller", v.controller},
           {"selector", v.selector},
           {"inputs",
            {{"pathways", v.pathways.generic_string()},
             {"bank", v.bank.generic_string()},
             {"corpus", v.corpus.generic_string()},
             {"lexicon", v.lexicon.generic_string()},
             {"prompts", v.prompts_dir.generic_string()},
             {"mock_gateway", v.mock_gateway.generic_string()}}},
           {"output_dir", v.output_dir.generic_string()},
           {"corruption",
            {{"error_type", v.error_type ? json(*v.error_type) : json("mixed")},
             {"difficulty", v.difficulty},
             {"fraction", v.fraction}}},
           {"seeds", v.seeds},
           {"gateway", v.gateway},
           {"judge", v.judge},
           {"score", v.score},
           {"corpus_top_k", v.corpus_top_k},
           {"debate", {{"claimsmiths", v.debate_claimsmiths}, {"turns", v.debate_turns}}}};
  put_opt(j, "game", v.game);
}
void from_json(const json& j, ExperimentSpec& v) {
  v = ExperimentSpec{};
  get_or(j, "name", v.name);
  v.task = j.at("task").get<TaskKind>();
  v.method = j.at("method").get<Method>();
  get_opt(j, "game", v.game);
  get_or(j, "controller", v.controller);
  get_or(j, "selector", v.selector);
  const json inputs = j.value("inputs", json::object());
  auto path = [&inputs](const char* key) {
    return std::filesystem::path(inputs.value(key, std::string()));
  };
  v.pathways = path("pathways");
  v.bank = path("bank");
  v.corpus = path("corpus");
  v.lexicon = path("lexicon");
  v.prompts_dir = path("prompts");
  v.mock_gateway = path("mock_gateway");
  v.output_dir = j.value("output_dir", std::string());
  if (j.contains("corruption")) {
    const auto& c = j.at("corruption");
    const auto type = c.value("error_type", std::string("mixed"));
    if (type != "mixed") v.error_type = parse_enum<ErrorType>(type);
    get_or(c, "difficulty", v.difficulty);
    get_or(c, "fraction", v.fraction);
  }
  get_or(j, "seeds", v.seeds);
  get_or(j, "gateway", v.gateway);
  get_or(j, "judge", v.judge);
  get_or(j, "score", v.score);
  get_or(j, "corpus_top_k", v.corpus_top_k);
  if (j.contains("debate")) {
    get_or(j.at("debate"), "claimsmiths", v.debate_claimsmiths);
    get_or(j.at("debate"), "turns", v.debate_turns);
  }
}

void to_json(json& j, const RunRecord& v) {
  j = json{{"run_id", v.run_id},         {"pathway_id", v.pathway_id},
           {"seed", v.seed},             {"status", v.status},
           {"started_at", v.started_at}, {"finished_at", v.finished_at}};
  put_opt(j, "error", v.error);
}
void from_json(const json& j, RunRecord& v) {
  v.run_id = j.at("run_id").get<std::string>();
  v.pathway_id = j.value("pathway_id", "");
  v.seed = j.value("seed", std::uint64_t{0});
  v.status = j.at("status").get<RunStatus>();
  v.started_at = j.value("started_at", "");
  v.finished_at = j.value("finished_at", "");
  get_opt(j, "error", v.error);
}

void to_json(json& j, const ResultRow& v) {
  j = json{{"run_id", v.run_id},         {"pathway_id", v.pathway_id}, {"method", v.method},
           {"seed", v.seed},             {"error_type", v.error_type}, {"difficulty", v.difficulty},
           {"fraction", v.fraction},     {"metrics", v.metrics}};
}
void from_json(const json& j, ResultRow& v) {
  v.run_id = j.at("run_id").get<std::string>();
  v.pathway_id = j.value("pathway_id", "");
  v.method = j.at("method").get<std::string>();
  v.seed = j.value("seed", std::uint64_t{0});
  v.error_type = j.value("error_type", "");
  v.difficulty = j.value("difficulty", "");
  v.fraction = j.value("fraction", "");
  v.metrics = j.at("metrics").get<std::map<std::string, double>>();
}

void to_json(json& j, const AggregateRow& v) {
  j = json{{"stratum", v.stratum}, {"method", v.method}, {"metric", v.metric}, {"n", v.n},
           {"mean", v.mean},       {"ci_low", v.ci_low}, {"ci_high", v.ci_high}};
}
void from_json(const json& j, AggregateRow& v) {
  v.stratum = j.at("stratum").get<std::string>();
  v.method = j.at("method").get<std::string>();
  v.metric = j.at("metric").get<std::string>();
  v.n = j.at("n").get<std::size_t>();
  v.mean = j.at("mean").get<double>();
  v.ci_low = j.at("ci_low").get<double>();
  v.ci_high = j.at("ci_high").get<double>();
}

void to_json(json& j, const BootstrapOptions& v) {
  j = json{{"resamples", v.resamples}, {"seed", v.seed}, {"confidence", v.confidence}};
}
void from_json(const json& j, BootstrapOptions& v) {
  get_or(j, "resamples", v.resamples);
  get_or(j, "seed", v.seed);
  get_or(j, "confidence", v.confidence);
}

void to_json(json& j, const MetricReport& v) {
  j = json{{"rows", v.rows},
           {"aggregates", v.aggregates},
           {"empty_strata", v.empty_strata},
           {"bootstrap", v.bootstrap}};
}
void from_json(const json& j, MetricReport& v) {
  v.rows = j.at("rows").get<std::vector<ResultRow>>();
  v.aggregates = j.at("aggregates").get<std::vector<AggregateRow>>();
  v.empty_strata = j.value("empty_strata", std::vector<std::string>{});
  get_or(j, "bootstrap", v.bootstrap);
}

std::string to_canonical_json(const json& j) { return j.dump(); }

}  // namespace hypgame
