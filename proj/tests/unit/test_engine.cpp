#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "game_cases.hpp"
#include "hypgame/engine.hpp"
#include "hypgame/error.hpp"

using namespace hypgame;

namespace {

HypothesisState three() {
  return parse_pathway({"demo", {"A activates B", "B inhibits C", "C binds D"}, std::nullopt});
}

MoveRequest prune_req(std::set<std::string> targets, std::optional<std::set<std::string>> region = std::nullopt) {
  return {"prune", "drop it", std::move(region), std::move(targets)};
}

GameConfig config(std::size_t max_rounds = 5) {
  GameConfig c;
  c.mode = Mode::uniform("test", {"prune", "expand_corpus"});
  c.max_rounds = max_rounds;
  c.seed = 9;
  c.task_goal = "Repair the pathway.";
  return c;
}

// Rewrites the first fragment of the state regardless of the request region.
class TrespassingExecutor final : public Executor {
 public:
  MoveOutcome execute(const HypothesisState& state, const MoveRequest&, const Context&) const override {
    MoveOutcome out;
    out.state = state;
    out.state.fragments.front().text = "A represses B";
    out.delta = diff_states(state, out.state);
    return out;
  }
};

// Appends "<tag> step" to the state.
class AppendExecutor final : public Executor {
 public:
  explicit AppendExecutor(std::string tag) : tag_(std::move(tag)) {}
  MoveOutcome execute(const HypothesisState& state, const MoveRequest&, const Context&) const override {
    MoveOutcome out;
    out.state = state;
    const std::string text = tag_ + " step " + std::to_string(state.size());
    out.state.fragments.push_back(make_claim(fresh_fragment_id(state, text), text, {}, state.fragments.back().step_index + 1));
    out.delta = diff_states(state, out.state);
    return out;
  }

 private:
  std::string tag_;
};

}  // namespace

TEST(Modes, PresetsAreValid) {
  const auto reg = MoveRegistry::standard();
  EXPECT_NO_THROW(validate(Mode::discovery(), &reg));
  EXPECT_NO_THROW(validate(Mode::validation(), &reg));
  Mode zero{"z", "", {"prune"}, {{"prune", 0.0}}};
  EXPECT_THROW(validate(zero), Error);
  Mode unknown = Mode::uniform("u", {"teleport"});
  EXPECT_THROW(validate(unknown, &reg), Error);
}

TEST(Sampling, DegenerateAndUniform) {
  Mode one{"one", "", {"expand_corpus"}, {{"expand_corpus", 1.0}}};
  Rng rng(1);
  for (const auto& m : sample_moves(one, 50, rng)) EXPECT_EQ(m, "expand_corpus");

  const auto uniform = Mode::uniform("u", {"prune", "expand_corpus", "expand_introspection", "debate"});
  std::map<std::string, int> counts;
  Rng rng2(2);
  for (const auto& m : sample_moves(uniform, 10000, rng2)) ++counts[m];
  for (const auto& [name, n] : counts) EXPECT_NEAR(n / 10000.0, 0.25, 0.02) << name;
  EXPECT_EQ(move_probabilities(uniform), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
}

TEST(SimpleGame, ImmediateTermination) {
  cases::World world;
  ScriptedController controller({});
  const auto h0 = three();
  const auto t = run_simple_game(config(), h0, controller, world.setup());
  EXPECT_TRUE(t.rounds.empty());
  EXPECT_EQ(t.final, h0);
  EXPECT_EQ(t.termination_reason, TerminationReason::controller);
}

TEST(SimpleGame, ScriptedPruneReplays) {
  cases::World world;
  ScriptedController controller({{{prune_req({"s2"})}, false, "drop s2"}});
  const auto h0 = three();
  const auto t = run_simple_game(config(), h0, controller, world.setup());
  ASSERT_EQ(t.rounds.size(), 1u);
  EXPECT_EQ(t.final.find("s2"), nullptr);
  EXPECT_EQ(t.final.size(), 2u);
  EXPECT_EQ(replay(t, h0), t.final);
  EXPECT_EQ(t.rounds[0].state_digest, state_digest(t.final));
}

TEST(SimpleGame, MaxRoundsCap) {
  cases::World world;
  ExecutorMap executors = world.executors;
  executors["expand_corpus"] = std::make_shared<AppendExecutor>("grow");
  const GameSetup setup{world.registry, executors, world.context, {}};
  PolicyControllerOptions never_done;
  PolicyController controller(never_done);
  auto cfg = config(5);
  cfg.mode = Mode::uniform("grow", {"expand_corpus"});
  const auto t = run_simple_game(cfg, fixtures::pathway("mito10"), controller, setup);
  EXPECT_EQ(t.rounds.size(), 5u);
  EXPECT_EQ(t.termination_reason, TerminationReason::max_rounds);
}

TEST(SimpleGame, IdleControllerStalls) {
  cases::World world;
  ScriptedController controller({}, ScriptedController::WhenExhausted::idle);
  const auto t = run_simple_game(config(50), three(), controller, world.setup());
  EXPECT_EQ(t.termination_reason, TerminationReason::stalled);
  EXPECT_LT(t.rounds.size(), 50u);
}

TEST(SimpleGame, OverBudgetRoundAppliesNothing) {
  cases::World world;
  auto cfg = config();
  cfg.budget.k_max = 1;
  ScriptedController controller({{{prune_req({"s0"}), prune_req({"s1"})}, false, ""}});
  const auto h0 = three();
  const auto t = run_simple_game(cfg, h0, controller, world.setup());
  ASSERT_EQ(t.rounds.size(), 1u);
  EXPECT_TRUE(t.rounds[0].applied.empty());
  EXPECT_TRUE(t.rounds[0].error.has_value());
  EXPECT_EQ(t.final.fragments, h0.fragments);
}

TEST(SimpleGame, ScorerFillsRounds) {
  cases::World world;
  auto setup = world.setup();
  setup.scorer = [](const HypothesisState& s) { return ScoreVector{0.0, 0.0, 0.0, static_cast<double>(s.size())}; };
  ScriptedController controller({{{prune_req({"s2"})}, false, ""}});
  const auto t = run_simple_game(config(), three(), controller, setup);
  ASSERT_TRUE(t.rounds[0].scores.has_value());
  EXPECT_EQ(t.rounds[0].scores->t_frag, 2.0);
}

TEST(LocalizedGame, RegionPruneKeepsOthersIdentical) {
  cases::World world;
  auto cfg = config();
  cfg.variant = GameVariant::localized;
  ScriptedController controller({{{prune_req({"s1"}, std::set<std::string>{"s1"})}, false, ""}});
  const auto h0 = three();
  const auto t = run_localized_game(cfg, h0, controller, PerFragmentSelector{}, world.setup());
  ASSERT_EQ(t.final.size(), 2u);
  EXPECT_TRUE(same_content(t.final.fragments[0], h0.fragments[0]));
  EXPECT_TRUE(same_content(t.final.fragments[1], h0.fragments[2]));
  EXPECT_EQ(t.rounds[0].regions.size(), 3u);
}

TEST(LocalizedGame, TrespassRollsBack) {
  cases::World world;
  ExecutorMap executors = world.executors;
  executors["prune"] = std::make_shared<TrespassingExecutor>();
  const GameSetup setup{world.registry, executors, world.context, {}};
  auto cfg = config();
  cfg.variant = GameVariant::localized;
  ScriptedController controller({{{prune_req({}, std::set<std::string>{"s1"})}, false, ""}});
  const auto h0 = three();
  const auto t = run_localized_game(cfg, h0, controller, WholeStateSelector{}, setup);
  ASSERT_EQ(t.rounds.size(), 1u);
  EXPECT_TRUE(t.rounds[0].rolled_back);
  EXPECT_TRUE(t.rounds[0].applied.empty());
  ASSERT_FALSE(t.rounds[0].violations.empty());
  EXPECT_EQ(t.rounds[0].violations[0].kind, "region");
  EXPECT_EQ(t.final.fragments, h0.fragments);
}

TEST(LocalizedGame, WholeStateMatchesSimple) {
  cases::World world;
  std::mt19937_64 gen(41);
  for (int i = 0; i < 100; ++i) {
    auto k = cases::random_case(gen, world.mode, false);
    ScriptedController a(k.plan), b(k.plan);
    const auto simple = run_simple_game(k.config, k.initial, a, world.setup());
    auto cfg = k.config;
    cfg.variant = GameVariant::localized;
    const auto local = run_localized_game(cfg, k.initial, b, WholeStateSelector{}, world.setup());
    EXPECT_EQ(simple.final, local.final) << "case " << i;
    EXPECT_EQ(simple.rounds.size(), local.rounds.size());
  }
}

TEST(Composition, AssociativeAtStateLevel) {
  cases::World world;
  ExecutorMap executors;
  executors["a"] = std::make_shared<AppendExecutor>("alpha");
  executors["b"] = std::make_shared<AppendExecutor>("beta");
  executors["c"] = std::make_shared<AppendExecutor>("gamma");
  MoveRegistry reg;
  for (auto n : {"a", "b", "c"}) reg = register_move(reg, MoveSpec::atomic(n));
  const auto ab = compose(std::vector<MoveSpec>{reg.at("a"), reg.at("b")});
  const auto bc = compose(std::vector<MoveSpec>{reg.at("b"), reg.at("c")});
  reg = register_move(register_move(reg, ab), bc);
  const GameSetup setup{reg, executors, world.context, {}};
  auto cfg = config();
  cfg.mode = Mode::uniform("abc", {"a", "b", "c"});
  auto run = [&](std::vector<std::string> names) {
    ScriptedRound round;
    for (auto& n : names) round.requests.push_back({n, "go", std::nullopt, {}});
    ScriptedController controller({round});
    return run_simple_game(cfg, three(), controller, setup).final;
  };
  const auto flat = run({"a", "b", "c"});
  EXPECT_EQ(flat.size(), 6u);
  EXPECT_EQ(run({ab.name, "c"}), flat);
  EXPECT_EQ(run({"a", bc.name}), flat);
}

TEST(Replay, EmptyTrajectoryAndTampering) {
  cases::World world;
  const auto h0 = three();
  Trajectory empty;
  empty.initial = h0;
  empty.final = h0;
  EXPECT_EQ(replay(empty, h0), h0);

  ScriptedController controller({{{prune_req({"s2"})}, false, ""}, {{prune_req({"s1"})}, false, ""}});
  auto t = run_simple_game(config(), h0, controller, world.setup());
  ASSERT_EQ(t.rounds.size(), 2u);
  auto tampered = t;
  tampered.rounds[1].applied[0].delta.ops[0] = RemoveOp{"s0"};
  try {
    replay(tampered, h0);
    FAIL();
  } catch (const IntegrityError& e) {
    EXPECT_EQ(e.round(), 1u);
  }
  EXPECT_THROW(replay(t, fixtures::pathway("mito10")), Error);
}

TEST(TrajectoryIo, RoundTripAndTamperedFile) {
  cases::World world;
  const auto h0 = three();
  ScriptedController controller({{{prune_req({"s2"})}, false, "first"}});
  const auto t = run_simple_game(config(), h0, controller, world.setup());
  std::stringstream io;
  write_trajectory(io, t);
  const std::string text = io.str();
  auto back = read_trajectory(io);
  EXPECT_EQ(back, t);

  std::string edited = text;
  const auto pos = edited.find("\"s2\"");
  ASSERT_NE(pos, std::string::npos);
  std::size_t later = edited.find("\"s2\"", edited.find('\n') + 1);
  ASSERT_NE(later, std::string::npos);
  edited.replace(later, 4, "\"s0\"");
  std::stringstream in(edited);
  const auto loaded = read_trajectory(in);
  EXPECT_THROW(replay(loaded, h0), IntegrityError);
}

TEST(Selectors, RegionShapes) {
  const auto s = fixtures::pathway("mito10");
  const Context ctx{"goal", {}, std::nullopt};
  EXPECT_EQ(WholeStateSelector{}.select(s, ctx, 0).at(0).fragment_ids, s.ids());
  EXPECT_EQ(PerFragmentSelector{}.select(s, ctx, 0).size(), s.size());
  const auto windows = SlidingWindowSelector(3, 2).select(s, ctx, 0);
  for (const auto& w : windows) {
    EXPECT_LE(w.fragment_ids.size(), 3u);
    EXPECT_FALSE(w.fragment_ids.empty());
  }
  std::set<std::string> covered;
  for (const auto& w : windows) covered.insert(w.fragment_ids.begin(), w.fragment_ids.end());
  EXPECT_EQ(covered, s.ids());
  const auto mentions = EntityMentionSelector(fixtures::lexicon()).select(s, ctx, 0);
  EXPECT_FALSE(mentions.empty());
  for (const auto& r : mentions) {
    for (const auto& id : r.fragment_ids) EXPECT_NE(s.find(id), nullptr);
  }
}

TEST(PolicyControllerTest, SameSeedSameTrajectory) {
  cases::World world;
  PolicyControllerOptions opt;
  opt.random_prune_targets = true;
  PolicyController a(opt), b(opt);
  const auto h0 = fixtures::pathway("mito10");
  const auto ta = run_simple_game(config(4), h0, a, world.setup());
  const auto tb = run_simple_game(config(4), h0, b, world.setup());
  EXPECT_EQ(ta, tb);
  EXPECT_EQ(replay(ta, h0), ta.final);
}
