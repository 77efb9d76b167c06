#include "hypgame/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

Mode Mode::discovery() {
  return {"discovery",
          "Discovery mode favours generative moves: grow the hypothesis with new, "
          "evidence-backed statements and fill gaps in the pathway.",
          {std::string(moves::prune), std::string(moves::expand_corpus),
           std::string(moves::expand_introspection), std::string(moves::debate)},
          {{std::string(moves::prune), 0.1},
           {std::string(moves::expand_corpus), 0.4},
           {std::string(moves::expand_introspection), 0.3},
           {std::string(moves::debate), 0.2}}};
}

Mode Mode::validation() {
  return {"validation",
          "Validation mode favours critical moves: challenge statements and remove those "
          "that are wrong, unsupported or off-topic.",
          {std::string(moves::prune), std::string(moves::expand_corpus),
           std::string(moves::expand_introspection), std::string(moves::debate)},
          {{std::string(moves::prune), 0.4},
           {std::string(moves::expand_corpus), 0.2},
           {std::string(moves::expand_introspection), 0.1},
           {std::string(moves::debate), 0.3}}};
}

Mode Mode::uniform(std::string name, std::vector<std::string> moves) {
  Mode m;
  m.name = std::move(name);
  m.allowed = std::move(moves);
  for (const auto& mv : m.allowed) m.weights[mv] = 1.0;
  return m;
}

void validate(const Mode& mode, const MoveRegistry* registry) {
  if (trim(mode.name).empty()) throw Error(ErrorCode::invalid_input, "mode needs a name");
  if (mode.allowed.empty()) throw Error(ErrorCode::invalid_input, "mode '" + mode.name + "' allows no moves");
  std::set<std::string> allowed;
  for (const auto& m : mode.allowed) {
    if (!allowed.insert(m).second) {
      throw Error(ErrorCode::invalid_input, "mode '" + mode.name + "' lists '" + m + "' twice");
    }
    if (registry && !registry->contains(m)) {
      throw Error(ErrorCode::unknown_move, "mode '" + mode.name + "' allows unregistered move '" + m + "'");
    }
  }
  bool positive = false;
  for (const auto& [m, w] : mode.weights) {
    if (!allowed.count(m)) {
      throw Error(ErrorCode::invalid_input, "mode '" + mode.name + "' weights move '" + m + "' it does not allow");
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::invalid_input, "mode '" + mode.name + "' has a negative or non-finite weight");
    }
    positive = positive || w > 0.0;
  }
  if (!positive) throw Error(ErrorCode::invalid_input, "mode '" + mode.name + "' has all-zero weights");
}

std::vector<double> move_probabilities(const Mode& mode) {
  validate(mode);
  std::vector<double> p;
  double total = 0.0;
  for (const auto& m : mode.allowed) {
    auto it = mode.weights.find(m);
    p.push_back(it == mode.weights.end() ? 0.0 : it->second);
    total += p.back();
  }
  for (auto& x : p) x /= total;
  return p;
}

bool mode_allows(const Mode& mode, const MoveRegistry& registry, const std::string& move) {
  if (!registry.contains(move)) return false;
  for (const auto& atomic : registry.expand(move)) {
    if (std::find(mode.allowed.begin(), mode.allowed.end(), atomic) == mode.allowed.end() &&
        std::find(mode.allowed.begin(), mode.allowed.end(), move) == mode.allowed.end()) {
      return false;
    }
  }
  return true;
}

void validate(const GameConfig& config) {
  validate(config.mode);
  validate(config.budget);
  if (config.max_rounds < 1) throw Error(ErrorCode::invalid_input, "max_rounds must be at least 1");
}

std::string state_digest(const HypothesisState& state) {
  const nlohmann::json j = state;
  return to_hex(fnv1a64(j.dump()));
}

std::vector<std::string> sample_moves(const Mode& mode, std::size_t k, Rng& rng) {
  if (k < 1) throw Error(ErrorCode::invalid_input, "sample_moves needs k >= 1");
  const auto p = move_probabilities(mode);
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) last_positive = i;
  }
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t draw = 0; draw < k; ++draw) {
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t chosen = last_positive;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (p[i] > 0.0 && u < acc) {
        chosen = i;
        break;
      }
    }
    out.push_back(mode.allowed[chosen]);
  }
  return out;
}

namespace {

struct RegionViolation {
  std::string message;
  std::vector<Violation> violations;
};

void check_locality(const HypothesisState& before, const HypothesisState& after,
                    const std::set<std::string>& region, const std::string& move,
                    std::vector<Violation>& out) {
  for (const auto& f : before.fragments) {
    if (region.count(f.id)) continue;
    const Fragment* g = after.find(f.id);
    if (!g) {
      out.push_back({"region", move + " removed " + f.id + " outside its region", {f.id}, false});
    } else if (!same_content(f, *g)) {
      out.push_back({"region", move + " changed " + f.id + " outside its region", {f.id}, false});
    }
  }
}

AppliedMove execute_request(HypothesisState& state, const MoveRequest& request,
                            const GameSetup& setup, bool localized) {
  const HypothesisState before = state;
  AppliedMove applied;
  applied.request = request;
  for (const auto& atomic : setup.registry.expand(request.move)) {
    auto it = setup.executors.find(atomic);
    if (it == setup.executors.end() || !it->second) {
      throw Error(ErrorCode::unknown_move, "no executor for move '" + atomic + "'");
    }
    MoveRequest sub = request;
    sub.move = atomic;
    MoveOutcome outcome = it->second->execute(state, sub, setup.context);
    state = std::move(outcome.state);
    applied.evidence.insert(applied.evidence.end(), outcome.evidence.begin(), outcome.evidence.end());
    applied.violations.insert(applied.violations.end(), outcome.violations.begin(),
                              outcome.violations.end());
    applied.log.insert(applied.log.end(), outcome.log.begin(), outcome.log.end());
    if (outcome.debate) applied.debate = std::move(outcome.debate);
  }
  validate(state);

  std::set<std::string> touched;
  if (localized) {
    const auto& region = *request.target_region;
    std::vector<Violation> broken;
    check_locality(before, state, region, request.move, broken);
    if (!broken.empty()) throw RegionViolation{broken.front().message, std::move(broken)};
    touched = region;
    for (const auto& f : state.fragments) {
      if (!before.find(f.id)) touched.insert(f.id);
    }
  } else {
    touched = state.ids();
  }
  auto consistency = enforce_consistency(state, touched);
  state = std::move(consistency.state);
  applied.violations.insert(applied.violations.end(), consistency.violations.begin(),
                            consistency.violations.end());
  applied.delta = diff_states(before, state);
  return applied;
}

Trajectory play(const GameConfig& config, const HypothesisState& initial, Controller& controller,
                const Selector* selector, const GameSetup& setup) {
  validate(config);
  validate(config.mode, &setup.registry);
  validate(initial);
  validate(setup.context);
  const bool localized = selector != nullptr;

  Trajectory t;
  t.config = config;
  t.initial = initial;
  t.termination_reason = TerminationReason::max_rounds;
  controller.begin(config);

  HypothesisState state = initial;
  std::size_t idle_rounds = 0;
  for (std::size_t r = 0; r < config.max_rounds; ++r) {
    RoundRecord rec;
    rec.index = r;
    const HypothesisState start = state;
    bool terminated = false;
    try {
      if (localized) {
        rec.regions = selector->select(state, setup.context, r);
        if (rec.regions.empty()) throw Error(ErrorCode::region_violation, "selector produced no regions");
        for (const auto& region : rec.regions) {
          if (region.fragment_ids.empty()) throw Error(ErrorCode::region_violation, "selector produced an empty region");
          for (const auto& id : region.fragment_ids) {
            if (!state.find(id)) throw Error(ErrorCode::region_violation, "region names unknown fragment " + id);
          }
        }
      }
      const RoundView view{state, r, config, setup.context, setup.registry, rec.regions};
      rec.diagnosis = controller.diagnose(view);
      if (rec.diagnosis.terminate) {
        rec.diagnosis.recommendations.clear();
        t.final_diagnosis = rec.diagnosis;
        t.termination_reason = TerminationReason::controller;
        terminated = true;
      } else {
        rec.requested = controller.select(view, rec.diagnosis);
        if (localized) {
          for (std::size_t i = 0; i < rec.requested.size(); ++i) {
            auto& req = rec.requested[i];
            if (!req.target_region) req.target_region = rec.regions[i % rec.regions.size()].fragment_ids;
          }
        }
        for (const auto& req : rec.requested) {
          validate(req);
          setup.registry.at(req.move);
          if (!mode_allows(config.mode, setup.registry, req.move)) {
            throw Error(ErrorCode::unknown_move, "move '" + req.move + "' is not allowed in mode '" +
                                                     config.mode.name + "'");
          }
        }
        enforce_budget(rec.requested, config.budget, setup.registry);
        // Fragments created under a region belong to it for the rest of the round.
        std::map<std::set<std::string>, std::set<std::string>> grown;
        for (const auto& req : rec.requested) {
          if (localized) {
            MoveRequest scoped = req;
            auto& extra = grown[*req.target_region];
            std::set<std::string> scope = *req.target_region;
            scope.insert(extra.begin(), extra.end());
            std::set<std::string> live;
            for (const auto& id : scope) {
              if (state.find(id)) live.insert(id);
            }
            if (live.empty()) throw Error(ErrorCode::region_violation, "region of '" + req.move + "' no longer exists");
            scoped.target_region = std::move(live);
            HypothesisState next = state;
            rec.applied.push_back(execute_request(next, scoped, setup, true));
            for (const auto& f : next.fragments) {
              if (!state.find(f.id)) extra.insert(f.id);
            }
            state = std::move(next);
          } else {
            HypothesisState next = state;
            rec.applied.push_back(execute_request(next, req, setup, false));
            state = std::move(next);
          }
        }
      }
    } catch (RegionViolation& v) {
      rec.error = "region violation: " + v.message;
      rec.violations = std::move(v.violations);
      rec.rolled_back = true;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    if (terminated) break;
    if (rec.rolled_back) {
      state = start;
      rec.applied.clear();
    }
    state.round = r + 1;
    rec.state_digest = state_digest(state);
    if (setup.scorer) {
      try {
        rec.scores = setup.scorer(state);
      } catch (const Error&) {
        rec.scores.reset();
      }
    }
    const bool changed = std::any_of(rec.applied.begin(), rec.applied.end(),
                                     [](const AppliedMove& a) { return !a.delta.empty(); });
    t.rounds.push_back(std::move(rec));
    idle_rounds = changed ? 0 : idle_rounds + 1;
    if (idle_rounds >= 2) {
      t.termination_reason = TerminationReason::stalled;
      break;
    }
  }
  t.final = state;
  return t;
}

}  // namespace

Trajectory run_simple_game(const GameConfig& config, const HypothesisState& initial,
                           Controller& controller, const GameSetup& setup) {
  return play(config, initial, controller, nullptr, setup);
}

Trajectory run_localized_game(const GameConfig& config, const HypothesisState& initial,
                              Controller& controller, const Selector& selector,
                              const GameSetup& setup) {
  return play(config, initial, controller, &selector, setup);
}

Trajectory run_game(const GameConfig& config, const HypothesisState& initial,
                    Controller& controller, const Selector* selector, const GameSetup& setup) {
  if (config.variant == GameVariant::simple) return run_simple_game(config, initial, controller, setup);
  if (selector) return run_localized_game(config, initial, controller, *selector, setup);
  const WholeStateSelector whole;
  return run_localized_game(config, initial, controller, whole, setup);
}

HypothesisState replay(const Trajectory& trajectory, const HypothesisState& initial) {
  if (!(trajectory.initial == initial)) {
    throw IntegrityError(0, "trajectory was recorded from a different initial state");
  }
  HypothesisState state = initial;
  for (std::size_t i = 0; i < trajectory.rounds.size(); ++i) {
    const auto& rec = trajectory.rounds[i];
    try {
      for (const auto& applied : rec.applied) state = apply_delta(state, applied.delta);
    } catch (const Error& e) {
      throw IntegrityError(i, "round " + std::to_string(i) + " does not replay: " + e.what());
    }
    state.round = rec.index + 1;
    if (state_digest(state) != rec.state_digest) {
      throw IntegrityError(i, "round " + std::to_string(i) + " diverges from its recorded state");
    }
  }
  if (!(state == trajectory.final)) {
    throw IntegrityError(trajectory.rounds.size(), "replayed state differs from the recorded final state");
  }
  return state;
}

}  // namespace hypgame
