#include <benchmark/benchmark.h>

#include <random>

#include "game_cases.hpp"
#include "hypgame/engine.hpp"

using namespace hypgame;

namespace {

void BM_PolicyGame(benchmark::State& state) {
  cases::World world;
  const auto setup = world.setup();
  const auto h0 = fixtures::pathway("mito14");
  GameConfig config;
  config.mode = world.mode;
  config.max_rounds = static_cast<std::size_t>(state.range(0));
  config.task_goal = "Repair the pathway.";
  PolicyControllerOptions options;
  options.random_prune_targets = true;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    PolicyController controller(options);
    benchmark::DoNotOptimize(run_simple_game(config, h0, controller, setup));
  }
}
BENCHMARK(BM_PolicyGame)->Arg(5)->Arg(20);

void BM_LocalizedScriptedGame(benchmark::State& state) {
  cases::World world;
  const auto setup = world.setup();
  std::mt19937_64 gen(3);
  std::vector<cases::Case> games;
  for (int i = 0; i < 64; ++i) {
    games.push_back(cases::random_case(gen, world.mode, true));
    games.back().config.variant = GameVariant::localized;
  }
  const SlidingWindowSelector selector(3, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& k = games[i++ % games.size()];
    ScriptedController controller(k.plan);
    benchmark::DoNotOptimize(run_localized_game(k.config, k.initial, controller, selector, setup));
  }
}
BENCHMARK(BM_LocalizedScriptedGame);

void BM_Replay(benchmark::State& state) {
  cases::World world;
  const auto setup = world.setup();
  const auto h0 = fixtures::pathway("mito14");
  GameConfig config;
  config.mode = world.mode;
  config.max_rounds = 20;
  config.seed = 5;
  config.task_goal = "Repair the pathway.";
  PolicyControllerOptions options;
  options.random_prune_targets = true;
  PolicyController controller(options);
  const auto t = run_simple_game(config, h0, controller, setup);
  for (auto _ : state) benchmark::DoNotOptimize(replay(t, h0));
}
BENCHMARK(BM_Replay);

}  // namespace
