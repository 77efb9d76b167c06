#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hypgame {

namespace moves {
inline constexpr std::string_view prune = "prune";
inline constexpr std::string_view expand_corpus = "expand_corpus";
inline constexpr std::string_view expand_introspection = "expand_introspection";
inline constexpr std::string_view debate = "debate";
}  // namespace moves

enum class MoveKind { atomic, composite };

struct MoveSpec {
  std::string name;
  MoveKind kind = MoveKind::atomic;
  std::vector<std::string> components;  // atomic names, non-empty iff composite

  bool operator==(const MoveSpec&) const = default;

  static MoveSpec atomic(std::string name) { return {std::move(name), MoveKind::atomic, {}}; }
};

// The grammar O. Immutable once built; register_move returns a new registry.
class MoveRegistry {
 public:
  MoveRegistry() = default;

  // prune, expand_corpus, expand_introspection, debate.
  static MoveRegistry standard();

  const MoveSpec* find(std::string_view name) const;
  const MoveSpec& at(std::string_view name) const;  // throws unknown_move
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  // Atomic names executed for `name`, in order.
  std::vector<std::string> expand(std::string_view name) const;

  const std::vector<MoveSpec>& specs() const noexcept { return specs_; }

  bool operator==(const MoveRegistry&) const = default;

 private:
  friend MoveRegistry register_move(MoveRegistry registry, MoveSpec spec);
  std::vector<MoveSpec> specs_;
};

// Throws duplicate_name, or unknown_move for a composite with a dangling component.
MoveRegistry register_move(MoveRegistry registry, MoveSpec spec);

// Composite whose execution is the components left to right. Composite inputs
// are flattened. Name is the component names joined with '+'.
MoveSpec compose(std::span<const MoveSpec> moves);

struct MoveRequest {
  std::string move;
  std::string instruction;
  std::optional<std::set<std::string>> target_region;  // edit scope
  std::set<std::string> targets;                       // explicit fragment ids

  bool operator==(const MoveRequest&) const = default;
};
void validate(const MoveRequest& request);

struct MoveBudget {
  std::size_t k_max = 4;

  bool operator==(const MoveBudget&) const = default;
};
void validate(const MoveBudget& budget);

struct BudgetCheck {
  bool ok = true;
  std::size_t counted = 0;  // atomic applications after composite expansion
};

BudgetCheck check_budget(std::span<const MoveRequest> requests, const MoveBudget& budget,
                         const MoveRegistry& registry);
// Same, but throws BudgetExceeded.
void enforce_budget(std::span<const MoveRequest> requests, const MoveBudget& budget,
                    const MoveRegistry& registry);

}  // namespace hypgame
