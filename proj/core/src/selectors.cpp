#include <map>

#include "hypgame/engine.hpp"

namespace hypgame {

std::vector<Region> WholeStateSelector::select(const HypothesisState& state, const Context&,
                                               std::size_t) const {
  if (state.empty()) return {};
  return {Region{state.ids()}};
}

std::vector<Region> PerFragmentSelector::select(const HypothesisState& state, const Context&,
                                                std::size_t) const {
  std::vector<Region> out;
  for (const auto& f : state.fragments) out.push_back(Region{{f.id}});
  return out;
}

SlidingWindowSelector::SlidingWindowSelector(std::size_t width, std::size_t stride)
    : width_(width), stride_(stride) {
  if (width_ < 1 || stride_ < 1) throw Error(ErrorCode::invalid_input, "window width and stride must be positive");
}

std::vector<Region> SlidingWindowSelector::select(const HypothesisState& state, const Context&,
                                                  std::size_t) const {
  std::vector<Region> out;
  const std::size_t n = state.size();
  for (std::size_t start = 0; start < n; start += stride_) {
    Region r;
    const std::size_t end = std::min(n, start + width_);
    for (std::size_t i = start; i < end; ++i) r.fragment_ids.insert(state.fragments[i].id);
    out.push_back(std::move(r));
    if (end == n) break;
  }
  return out;
}

std::vector<Region> EntityMentionSelector::select(const HypothesisState& state, const Context& context,
                                                  std::size_t round) const {
  std::map<std::string, std::set<std::string>> by_entity;
  for (const auto& f : state.fragments) {
    for (const auto& e : tag_entities(f.text, lexicon_)) by_entity[e].insert(f.id);
  }
  if (by_entity.empty()) return WholeStateSelector{}.select(state, context, round);
  std::vector<Region> out;
  for (auto& [_, ids] : by_entity) out.push_back(Region{std::move(ids)});
  return out;
}

}  // namespace hypgame
