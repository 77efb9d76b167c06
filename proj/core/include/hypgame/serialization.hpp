#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hypgame/agents.hpp"
#include "hypgame/corpus.hpp"
#include "hypgame/corruption.hpp"
#include "hypgame/engine.hpp"
#include "hypgame/evaluation.hpp"
#include "hypgame/experiment.hpp"
#include "hypgame/gateway.hpp"
#include "hypgame/hypothesis.hpp"
#include "hypgame/lexicon.hpp"
#include "hypgame/moves.hpp"
#include "hypgame/scoring.hpp"

namespace hypgame {

// Enum names as they appear in files. parse_enum throws invalid_input on an
// unknown name.
const char* to_string(FragmentKind v) noexcept;
const char* to_string(EvidenceSource v) noexcept;
const char* to_string(MoveKind v) noexcept;
const char* to_string(DocumentKind v) noexcept;
const char* to_string(EntityKind v) noexcept;
const char* to_string(ErrorType v) noexcept;
const char* to_string(Difficulty v) noexcept;
const char* to_string(CorruptionOperation v) noexcept;
const char* to_string(GameVariant v) noexcept;
const char* to_string(TerminationReason v) noexcept;
const char* to_string(TaskKind v) noexcept;
const char* to_string(Method v) noexcept;
const char* to_string(ControllerKind v) noexcept;
const char* to_string(SelectorKind v) noexcept;
const char* to_string(GatewayKind v) noexcept;
const char* to_string(JudgeKind v) noexcept;
const char* to_string(RunStatus v) noexcept;

template <class E>
E parse_enum(std::string_view name);

#define HYPGAME_JSON(T)                        \
  void to_json(nlohmann::json& j, const T& v); \
  void from_json(const nlohmann::json& j, T& v)

HYPGAME_JSON(FragmentKind);
HYPGAME_JSON(EvidenceSource);
HYPGAME_JSON(MoveKind);
HYPGAME_JSON(DocumentKind);
HYPGAME_JSON(EntityKind);
HYPGAME_JSON(ErrorType);
HYPGAME_JSON(Difficulty);
HYPGAME_JSON(CorruptionOperation);
HYPGAME_JSON(GameVariant);
HYPGAME_JSON(TerminationReason);
HYPGAME_JSON(TaskKind);
HYPGAME_JSON(Method);
HYPGAME_JSON(ControllerKind);
HYPGAME_JSON(SelectorKind);
HYPGAME_JSON(GatewayKind);
HYPGAME_JSON(JudgeKind);
HYPGAME_JSON(RunStatus);

HYPGAME_JSON(EvidenceRef);
HYPGAME_JSON(Fragment);
HYPGAME_JSON(HypothesisState);
HYPGAME_JSON(Context);
HYPGAME_JSON(DeltaOp);
HYPGAME_JSON(DeltaSet);
HYPGAME_JSON(PathwayRecord);
HYPGAME_JSON(Violation);

HYPGAME_JSON(MoveSpec);
HYPGAME_JSON(MoveRequest);
HYPGAME_JSON(MoveBudget);
HYPGAME_JSON(MoveRegistry);

HYPGAME_JSON(GatewayRequest);
HYPGAME_JSON(TokenUsage);
HYPGAME_JSON(GatewayResponse);
HYPGAME_JSON(CorpusDocument);

HYPGAME_JSON(EvidenceRecord);
HYPGAME_JSON(DebateTurn);
HYPGAME_JSON(DebateOutcome);

HYPGAME_JSON(ScoreVector);
HYPGAME_JSON(Mode);
HYPGAME_JSON(GameConfig);
HYPGAME_JSON(Diagnosis);
HYPGAME_JSON(Region);
HYPGAME_JSON(AppliedMove);
HYPGAME_JSON(RoundRecord);
HYPGAME_JSON(ScriptedRound);
HYPGAME_JSON(PolicyControllerOptions);

HYPGAME_JSON(LexiconEntry);
HYPGAME_JSON(PRF);
HYPGAME_JSON(RecallAttributes);
HYPGAME_JSON(JudgeVerdict);
HYPGAME_JSON(EntityDrift);

HYPGAME_JSON(CorruptionEntry);
HYPGAME_JSON(CorruptionPolicy);
HYPGAME_JSON(AppliedCorruption);
HYPGAME_JSON(CorruptionPlan);

HYPGAME_JSON(ControllerSpec);
HYPGAME_JSON(SelectorSpec);
HYPGAME_JSON(RunRecord);
HYPGAME_JSON(ResultRow);
HYPGAME_JSON(AggregateRow);
HYPGAME_JSON(BootstrapOptions);
HYPGAME_JSON(MetricReport);

#undef HYPGAME_JSON

// Paths are written as given; the caller resolves them.
void to_json(nlohmann::json& j, const ExperimentSpec& v);
void from_json(const nlohmann::json& j, ExperimentSpec& v);

// One compact JSON document per call, keys sorted.
std::string to_canonical_json(const nlohmann::json& j);

}  // namespace hypgame
