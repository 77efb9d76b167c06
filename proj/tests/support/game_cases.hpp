#pragma once

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hypgame/agents.hpp"
#include "hypgame/engine.hpp"
#include "hypgame/moves.hpp"

namespace cases {

inline const std::string composite_name = "prune+expand_corpus";

// Offline world shared by the randomized engine cases: prune and corpus expand
// executors, plus one registered composite.
struct World {
  hypgame::Corpus corpus = fixtures::corpus();
  hypgame::Lexicon lexicon = fixtures::lexicon();
  hypgame::MoveRegistry registry;
  hypgame::ExecutorMap executors;
  hypgame::Context context{"Repair the pathway.", {}, std::string("fixture corpus")};
  hypgame::Mode mode;

  World() {
    auto base = hypgame::MoveRegistry::standard();
    const std::vector<hypgame::MoveSpec> parts{*base.find(hypgame::moves::prune),
                                               *base.find(hypgame::moves::expand_corpus)};
    registry = hypgame::register_move(base, hypgame::compose(parts));
    hypgame::AgentDeps deps;
    deps.corpus = &corpus;
    deps.corpus_top_k = 2;
    executors = hypgame::standard_executors(deps);
    mode = hypgame::Mode::uniform("offline", {std::string(hypgame::moves::prune),
                                              std::string(hypgame::moves::expand_corpus)});
  }

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  hypgame::GameSetup setup() const { return {registry, executors, context, {}}; }
};

inline const std::vector<std::string>& query_words() {
  static const std::vector<std::string> words{"TIMM22", "MPP",     "presequence", "PITRM1", "matrix",
                                              "TOM",    "cysteine", "carrier",    "TIMM23", "ATP"};
  return words;
}

struct Case {
  hypgame::GameConfig config;
  hypgame::HypothesisState initial;
  std::vector<hypgame::ScriptedRound> plan;
};

// Random scripted game. Requests may be over budget, target unknown ids or use
// moves the mode forbids; the engine must cope with all of them.
inline Case random_case(std::mt19937_64& gen, const hypgame::Mode& mode, bool with_regions) {
  Case c;
  c.initial = fixtures::random_state(gen, 8);
  c.config.mode = mode;
  std::uniform_int_distribution<std::size_t> k_dist(1, 4);
  c.config.budget.k_max = k_dist(gen);
  c.config.max_rounds = 1 + std::uniform_int_distribution<std::size_t>(0, 4)(gen);
  c.config.seed = gen();
  c.config.task_goal = "Repair the pathway.";

  const auto initial_ids = c.initial.ids();
  std::vector<std::string> ids(initial_ids.begin(), initial_ids.end());
  ids.push_back("ghost");
  std::uniform_int_distribution<int> pct(0, 99);
  const std::size_t rounds = 1 + std::uniform_int_distribution<std::size_t>(0, 4)(gen);
  for (std::size_t r = 0; r < rounds; ++r) {
    hypgame::ScriptedRound round;
    const std::size_t n_req = std::uniform_int_distribution<std::size_t>(0, 5)(gen);
    for (std::size_t i = 0; i < n_req; ++i) {
      hypgame::MoveRequest req;
      const int roll = pct(gen);
      if (roll < 40) {
        req.move = std::string(hypgame::moves::prune);
      } else if (roll < 80) {
        req.move = std::string(hypgame::moves::expand_corpus);
      } else if (roll < 95) {
        req.move = composite_name;
      } else {
        req.move = std::string(hypgame::moves::debate);
      }
      const auto& words = query_words();
      req.instruction = words[gen() % words.size()] + " " + words[gen() % words.size()];
      if (req.move != hypgame::moves::expand_corpus && pct(gen) < 70) {
        req.targets.insert(ids[gen() % ids.size()]);
      }
      if (with_regions && pct(gen) < 30) {
        std::set<std::string> region;
        const std::size_t n = 1 + gen() % 3;
        for (std::size_t j = 0; j < n; ++j) region.insert(ids[gen() % ids.size()]);
        req.target_region = region;
      }
      round.requests.push_back(std::move(req));
    }
    c.plan.push_back(std::move(round));
  }
  return c;
}

inline std::unique_ptr<hypgame::Selector> random_selector(std::mt19937_64& gen, const hypgame::Lexicon& lexicon) {
  switch (gen() % 4) {
    case 0:
      return std::make_unique<hypgame::WholeStateSelector>();
    case 1:
      return std::make_unique<hypgame::PerFragmentSelector>();
    case 2:
      return std::make_unique<hypgame::SlidingWindowSelector>(1 + gen() % 3, 1 + gen() % 2);
    default:
      return std::make_unique<hypgame::EntityMentionSelector>(lexicon);
  }
}

}  // namespace cases
