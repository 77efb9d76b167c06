#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "hypgame/agents.hpp"
#include "hypgame/hypothesis.hpp"
#include "hypgame/lexicon.hpp"
#include "hypgame/moves.hpp"
#include "hypgame/rng.hpp"
#include "hypgame/scoring.hpp"

namespace hypgame {

struct Mode {
  std::string name;
  std::string description;  // injected into model controller prompts
  std::vector<std::string> allowed;
  std::map<std::string, double> weights;

  bool operator==(const Mode&) const = default;

  static Mode discovery();
  static Mode validation();
  static Mode uniform(std::string name, std::vector<std::string> moves);
};
// Throws invalid_input; with a registry, also unknown_move for unregistered moves.
void validate(const Mode& mode, const MoveRegistry* registry = nullptr);
// Normalized weights in `allowed` order (missing weights count as zero).
std::vector<double> move_probabilities(const Mode& mode);
// True when every atomic component of `move` is allowed by the mode.
bool mode_allows(const Mode& mode, const MoveRegistry& registry, const std::string& move);

enum class GameVariant { simple, localized };

struct GameConfig {
  Mode mode = Mode::discovery();
  MoveBudget budget;
  std::size_t max_rounds = 10;
  std::uint64_t seed = 0;
  GameVariant variant = GameVariant::simple;
  std::string task_goal;

  bool operator==(const GameConfig&) const = default;
};
void validate(const GameConfig& config);

struct Diagnosis {
  std::string summary;
  std::vector<MoveRequest> recommendations;
  bool terminate = false;

  bool operator==(const Diagnosis&) const = default;
};

struct Region {
  std::set<std::string> fragment_ids;

  bool operator==(const Region&) const = default;
};

struct AppliedMove {
  MoveRequest request;
  DeltaSet delta;
  std::vector<EvidenceRecord> evidence;
  std::vector<Violation> violations;
  std::vector<std::string> log;
  std::optional<DebateOutcome> debate;

  bool operator==(const AppliedMove&) const = default;
};

struct RoundRecord {
  std::size_t index = 0;
  Diagnosis diagnosis;
  std::vector<Region> regions;         // localized games only
  std::vector<MoveRequest> requested;  // as returned by the controller
  std::vector<AppliedMove> applied;    // empty when the round was rolled back
  std::optional<std::string> error;
  std::vector<Violation> violations;   // region violations that caused a rollback
  bool rolled_back = false;
  std::string state_digest;            // digest of the state after the round
  std::optional<ScoreVector> scores;

  bool operator==(const RoundRecord&) const = default;
};

enum class TerminationReason { controller, max_rounds, stalled };

struct Trajectory {
  GameConfig config;
  HypothesisState initial;
  std::vector<RoundRecord> rounds;
  std::optional<Diagnosis> final_diagnosis;  // the terminating diagnosis, if any
  HypothesisState final;
  TerminationReason termination_reason = TerminationReason::max_rounds;

  bool operator==(const Trajectory&) const = default;
};

std::string state_digest(const HypothesisState& state);

// k independent draws from the mode's normalized weights.
std::vector<std::string> sample_moves(const Mode& mode, std::size_t k, Rng& rng);

// --- controllers -------------------------------------------------------------

struct RoundView {
  const HypothesisState& state;
  std::size_t round;  // 0-based
  const GameConfig& config;
  const Context& context;
  const MoveRegistry& registry;
  const std::vector<Region>& regions;  // empty in simple games
};

// Controllers may keep per-game state; begin() is called once per game.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void begin(const GameConfig&) {}
  virtual Diagnosis diagnose(const RoundView& view) = 0;
  virtual std::vector<MoveRequest> select(const RoundView& view, const Diagnosis& diagnosis) = 0;
};

struct ScriptedRound {
  std::vector<MoveRequest> requests;
  bool terminate = false;
  std::string summary;

  bool operator==(const ScriptedRound&) const = default;
};

// Plays a fixed plan. Once the plan is used up it either terminates or keeps
// diagnosing with no moves (which the engine eventually treats as a stall).
class ScriptedController final : public Controller {
 public:
  enum class WhenExhausted { terminate, idle };
  explicit ScriptedController(std::vector<ScriptedRound> plan,
                              WhenExhausted when_exhausted = WhenExhausted::terminate);
  void begin(const GameConfig& config) override;
  Diagnosis diagnose(const RoundView& view) override;
  std::vector<MoveRequest> select(const RoundView& view, const Diagnosis& diagnosis) override;

 private:
  std::vector<ScriptedRound> plan_;
  WhenExhausted when_exhausted_;
  std::size_t next_ = 0;
};

struct PolicyControllerOptions {
  std::size_t moves_per_round = 1;  // clipped to the budget
  std::map<std::string, std::string> instructions;  // per move; defaults provided
  // Give prune one random target from the region (never the last fragment).
  bool random_prune_targets = false;
  std::optional<std::size_t> terminate_after;  // rounds
};

// Samples moves from the mode's distribution with a stream derived from the
// game seed.
class PolicyController final : public Controller {
 public:
  explicit PolicyController(PolicyControllerOptions options = {});
  void begin(const GameConfig& config) override;
  Diagnosis diagnose(const RoundView& view) override;
  std::vector<MoveRequest> select(const RoundView& view, const Diagnosis& diagnosis) override;

 private:
  PolicyControllerOptions options_;
  std::optional<Rng> rng_;
};

// Game Master backed by the diagnose and move_selection prompts.
class GatewayController final : public Controller {
 public:
  GatewayController(Gateway& gateway, const PromptLibrary& prompts, double temperature = 0.0)
      : gateway_(gateway), prompts_(prompts), temperature_(temperature) {}
  Diagnosis diagnose(const RoundView& view) override;
  std::vector<MoveRequest> select(const RoundView& view, const Diagnosis& diagnosis) override;

 private:
  PromptVars common_vars(const RoundView& view) const;
  Gateway& gateway_;
  const PromptLibrary& prompts_;
  double temperature_;
};

// --- selectors ---------------------------------------------------------------

class Selector {
 public:
  virtual ~Selector() = default;
  virtual std::vector<Region> select(const HypothesisState& state, const Context& context,
                                     std::size_t round) const = 0;
};

class WholeStateSelector final : public Selector {
 public:
  std::vector<Region> select(const HypothesisState& state, const Context& context,
                             std::size_t round) const override;
};

class PerFragmentSelector final : public Selector {
 public:
  std::vector<Region> select(const HypothesisState& state, const Context& context,
                             std::size_t round) const override;
};

// Windows of `width` consecutive fragments, advancing by `stride`.
class SlidingWindowSelector final : public Selector {
 public:
  explicit SlidingWindowSelector(std::size_t width, std::size_t stride = 1);
  std::vector<Region> select(const HypothesisState& state, const Context& context,
                             std::size_t round) const override;

 private:
  std::size_t width_;
  std::size_t stride_;
};

// One region per entity: the fragments mentioning it, ordered by canonical name.
class EntityMentionSelector final : public Selector {
 public:
  explicit EntityMentionSelector(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}
  std::vector<Region> select(const HypothesisState& state, const Context& context,
                             std::size_t round) const override;

 private:
  Lexicon lexicon_;
};

// --- games -------------------------------------------------------------------

using RoundScorer = std::function<ScoreVector(const HypothesisState&)>;

struct GameSetup {
  const MoveRegistry& registry;
  const ExecutorMap& executors;
  const Context& context;
  RoundScorer scorer;  // optional; fills RoundRecord::scores
};

Trajectory run_simple_game(const GameConfig& config, const HypothesisState& initial,
                           Controller& controller, const GameSetup& setup);

Trajectory run_localized_game(const GameConfig& config, const HypothesisState& initial,
                              Controller& controller, const Selector& selector,
                              const GameSetup& setup);

// Dispatches on config.variant; a localized game without a selector uses the
// whole state as its only region.
Trajectory run_game(const GameConfig& config, const HypothesisState& initial,
                    Controller& controller, const Selector* selector, const GameSetup& setup);

// Re-applies every recorded delta. Throws IntegrityError naming the first round
// whose digest does not match, or round == rounds.size() for a final mismatch.
HypothesisState replay(const Trajectory& trajectory, const HypothesisState& initial);

// JSONL: header {config, initial}, one line per round, final line.
void write_trajectory(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory(std::istream& in);

}  // namespace hypgame
