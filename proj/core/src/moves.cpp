#include "hypgame/moves.hpp"

#include "hypgame/error.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

MoveRegistry MoveRegistry::standard() {
  MoveRegistry registry;
  for (auto name : {moves::prune, moves::expand_corpus, moves::expand_introspection, moves::debate}) {
    registry = register_move(std::move(registry), MoveSpec::atomic(std::string(name)));
  }
  return registry;
}

const MoveSpec* MoveRegistry::find(std::string_view name) const {
  for (const auto& spec : specs_) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

const MoveSpec& MoveRegistry::at(std::string_view name) const {
  if (const auto* spec = find(name)) return *spec;
  throw Error(ErrorCode::unknown_move, "unknown move '" + std::string(name) + "'");
}

std::vector<std::string> MoveRegistry::expand(std::string_view name) const {
  const auto& spec = at(name);
  if (spec.kind == MoveKind::atomic) return {spec.name};
  return spec.components;
}

MoveRegistry register_move(MoveRegistry registry, MoveSpec spec) {
  if (trim(spec.name).empty()) throw Error(ErrorCode::invalid_input, "move name must be non-empty");
  if (registry.find(spec.name)) {
    throw Error(ErrorCode::duplicate_name, "move '" + spec.name + "' is already registered");
  }
  if (spec.kind == MoveKind::atomic && !spec.components.empty()) {
    throw Error(ErrorCode::invalid_input, "atomic move '" + spec.name + "' cannot have components");
  }
  if (spec.kind == MoveKind::composite) {
    if (spec.components.empty()) {
      throw Error(ErrorCode::invalid_input, "composite move '" + spec.name + "' has no components");
    }
    for (const auto& c : spec.components) {
      const auto* component = registry.find(c);
      if (!component || component->kind != MoveKind::atomic) {
        throw Error(ErrorCode::unknown_move, "composite move '" + spec.name +
                                                 "' references unregistered atomic move '" + c + "'");
      }
    }
  }
  registry.specs_.push_back(std::move(spec));
  return registry;
}

MoveSpec compose(std::span<const MoveSpec> moves) {
  if (moves.empty()) throw Error(ErrorCode::invalid_input, "cannot compose an empty move list");
  MoveSpec out;
  out.kind = MoveKind::composite;
  for (const auto& m : moves) {
    if (m.kind == MoveKind::atomic) {
      out.components.push_back(m.name);
    } else {
      out.components.insert(out.components.end(), m.components.begin(), m.components.end());
    }
  }
  out.name = join(out.components, "+");
  return out;
}

void validate(const MoveRequest& request) {
  if (trim(request.instruction).empty()) {
    throw Error(ErrorCode::invalid_input, "move request for '" + request.move + "' has no instruction");
  }
}

void validate(const MoveBudget& budget) {
  if (budget.k_max < 1) throw Error(ErrorCode::invalid_input, "k_max must be at least 1");
}

BudgetCheck check_budget(std::span<const MoveRequest> requests, const MoveBudget& budget,
                         const MoveRegistry& registry) {
  validate(budget);
  BudgetCheck check;
  for (const auto& r : requests) check.counted += registry.expand(r.move).size();
  check.ok = check.counted <= budget.k_max;
  return check;
}

void enforce_budget(std::span<const MoveRequest> requests, const MoveBudget& budget,
                    const MoveRegistry& registry) {
  auto check = check_budget(requests, budget, registry);
  if (!check.ok) throw BudgetExceeded(check.counted, budget.k_max);
}

}  // namespace hypgame
