#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypgame/corpus.hpp"
#include "hypgame/error.hpp"
#include "hypgame/gateway.hpp"
#include "hypgame/hypothesis.hpp"
#include "hypgame/moves.hpp"
#include "hypgame/prompts.hpp"

namespace hypgame {

struct EvidenceRecord {
  EvidenceRef ref;
  double relevance = 0.0;  // [0, 1]
  std::string text;

  bool operator==(const EvidenceRecord&) const = default;
};
void validate(const EvidenceRecord& record);

struct DebateTurn {
  std::size_t agent_index = 0;
  std::string stance;
  std::string argument;

  bool operator==(const DebateTurn&) const = default;
};

struct DebateOutcome {
  std::string topic;
  std::vector<std::string> stances;
  std::vector<DebateTurn> transcript;  // turn-major, agent index ascending within a turn
  std::string conclusion;
  std::optional<DeltaSet> recommended_delta;

  bool operator==(const DebateOutcome&) const = default;
};

struct DebateOptions {
  std::size_t n_claimsmiths = 2;
  std::size_t n_turns = 1;
  bool concurrent = true;  // issue claimsmith calls of one turn in parallel
  double temperature = 0.7;
};

// Gateway failure in the middle of a debate; keeps what was said so far.
class DebateError : public Error {
 public:
  DebateError(const std::string& message, std::vector<DebateTurn> partial)
      : Error(ErrorCode::gateway, message), partial_(std::move(partial)) {}

  const std::vector<DebateTurn>& partial_transcript() const noexcept { return partial_; }

 private:
  std::vector<DebateTurn> partial_;
};

// "[s0] statement" per line, in list order. `only` restricts to those ids.
std::string render_hypothesis(const HypothesisState& state,
                              const std::optional<std::set<std::string>>& only = std::nullopt);
std::string render_evidence(std::span<const EvidenceRecord> evidence);

// Lenient extraction of the first JSON object in a model reply (handles code
// fences and surrounding prose).
std::optional<nlohmann::json> extract_json_object(std::string_view text);

// --- prune -----------------------------------------------------------------

struct EditResult {
  HypothesisState state;
  DeltaSet delta;
  std::vector<Violation> violations;
};

using FragmentPredicate = std::function<bool(const Fragment&)>;

// Throws unknown_id for an id not in the state and invalid_input when every
// fragment would be removed.
EditResult prune(const HypothesisState& state, const std::set<std::string>& ids);
EditResult prune(const HypothesisState& state, const FragmentPredicate& predicate);

// --- retrieval -------------------------------------------------------------

// Ranks documents by |q ∩ d| / sqrt(|q|·|d|) over token sets of the query and of
// title + text. Zero-overlap documents are skipped; ties go to the smaller doc_id.
std::vector<EvidenceRecord> retrieve_corpus(std::string_view query, const Corpus& corpus,
                                            std::size_t k);

// One introspection record (relevance 1.0) wrapping the model's answer, or
// nothing if the model refused. Refusals are appended to `log` when given.
std::vector<EvidenceRecord> retrieve_introspection(std::string_view query,
                                                   const HypothesisState& state,
                                                   const Context& context, Gateway& gateway,
                                                   const PromptLibrary& prompts,
                                                   std::vector<std::string>* log = nullptr);

// --- expand ----------------------------------------------------------------

struct EditProposal {
  struct Addition {
    std::string text;
    std::optional<std::string> after_id;  // default: end of region, else end of state
    std::optional<Triple> triple;
  };
  struct Revision {
    std::string fragment_id;
    std::string text;
  };
  std::vector<Addition> additions;
  std::vector<Revision> revisions;
};

struct IntegrationInput {
  const HypothesisState& state;
  std::span<const EvidenceRecord> evidence;
  std::string_view instruction;
  const Context& context;
  const std::optional<std::set<std::string>>& region;
};

// Turns evidence into proposed edits. The model-backed integrator renders the
// expand prompt; the template integrator is an offline stand-in.
class Integrator {
 public:
  virtual ~Integrator() = default;
  virtual EditProposal propose(const IntegrationInput& input) const = 0;
};

// One appended statement per evidence record (its text).
class TemplateIntegrator final : public Integrator {
 public:
  EditProposal propose(const IntegrationInput& input) const override;
};

class GatewayIntegrator final : public Integrator {
 public:
  GatewayIntegrator(Gateway& gateway, const PromptLibrary& prompts, double temperature = 0.0)
      : gateway_(gateway), prompts_(prompts), temperature_(temperature) {}
  EditProposal propose(const IntegrationInput& input) const override;

 private:
  Gateway& gateway_;
  const PromptLibrary& prompts_;
  double temperature_;
};

class FunctionIntegrator final : public Integrator {
 public:
  using Fn = std::function<EditProposal(const IntegrationInput&)>;
  explicit FunctionIntegrator(Fn fn) : fn_(std::move(fn)) {}
  EditProposal propose(const IntegrationInput& input) const override { return fn_(input); }

 private:
  Fn fn_;
};

// Applies the integrator's proposal. New fragments cite the supplied evidence
// (introspection when none was supplied); revised fragments keep their id and
// gain the citations. Duplicate statements are dropped and reported.
EditResult expand(const HypothesisState& state, std::span<const EvidenceRecord> evidence,
                  std::string_view instruction, const Integrator& integrator,
                  const Context& context,
                  const std::optional<std::set<std::string>>& region = std::nullopt);

// --- debate ----------------------------------------------------------------

// Setup -> ClashOfClaims (n_turns rounds, every claimsmith once per round) ->
// Conclude. Never changes the hypothesis.
DebateOutcome run_debate(const HypothesisState& state, std::string_view topic,
                         const DebateOptions& options, Gateway& gateway,
                         const PromptLibrary& prompts);

// --- executors ---------------------------------------------------------------

struct MoveOutcome {
  HypothesisState state;
  DeltaSet delta;
  std::vector<EvidenceRecord> evidence;
  std::vector<Violation> violations;
  std::vector<std::string> log;
  std::optional<DebateOutcome> debate;
};

// Maps (state, request, context) to a new state. Implementations are stateless
// and safe to share between games.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual MoveOutcome execute(const HypothesisState& state, const MoveRequest& request,
                              const Context& context) const = 0;
};

using ExecutorMap = std::map<std::string, std::shared_ptr<const Executor>, std::less<>>;

// Explicit request targets are removed. Without targets a gateway (if any) is
// asked which fragments of the region to drop; otherwise the move is vacuous.
class PruneExecutor final : public Executor {
 public:
  PruneExecutor() = default;
  PruneExecutor(Gateway& gateway, const PromptLibrary& prompts)
      : gateway_(&gateway), prompts_(&prompts) {}
  MoveOutcome execute(const HypothesisState& state, const MoveRequest& request,
                      const Context& context) const override;

 private:
  Gateway* gateway_ = nullptr;
  const PromptLibrary* prompts_ = nullptr;
};

enum class EvidenceChannel { corpus, introspection };

struct ExpandExecutorOptions {
  EvidenceChannel channel = EvidenceChannel::corpus;
  std::size_t top_k = 3;
  // Ask the gateway to rewrite the instruction into a search query first.
  bool rewrite_query = false;
};

class ExpandExecutor final : public Executor {
 public:
  ExpandExecutor(ExpandExecutorOptions options, std::shared_ptr<const Integrator> integrator,
                 const Corpus* corpus, Gateway* gateway, const PromptLibrary* prompts);
  MoveOutcome execute(const HypothesisState& state, const MoveRequest& request,
                      const Context& context) const override;

 private:
  ExpandExecutorOptions options_;
  std::shared_ptr<const Integrator> integrator_;
  const Corpus* corpus_;
  Gateway* gateway_;
  const PromptLibrary* prompts_;
};

// Runs the debate and reports its conclusion as evidence; the state is unchanged.
class DebateExecutor final : public Executor {
 public:
  DebateExecutor(Gateway& gateway, const PromptLibrary& prompts, DebateOptions options = {})
      : gateway_(gateway), prompts_(prompts), options_(options) {}
  MoveOutcome execute(const HypothesisState& state, const MoveRequest& request,
                      const Context& context) const override;

 private:
  Gateway& gateway_;
  const PromptLibrary& prompts_;
  DebateOptions options_;
};

struct AgentDeps {
  Gateway* gateway = nullptr;  // null: offline executors only
  const Corpus* corpus = nullptr;
  const PromptLibrary* prompts = nullptr;
  std::shared_ptr<const Integrator> integrator;  // default: gateway if present, else template
  std::size_t corpus_top_k = 3;
  DebateOptions debate;
};

// Executors for the four standard moves. debate and expand_introspection need
// a gateway and are omitted without one.
ExecutorMap standard_executors(const AgentDeps& deps);

}  // namespace hypgame
