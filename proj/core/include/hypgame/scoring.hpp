#pragma once

#include <array>
#include <span>

#include "hypgame/hypothesis.hpp"
#include "hypgame/lexicon.hpp"

namespace hypgame {

struct ScoreVector {
  double d_known = 0.0;
  double delta_div = 0.0;
  double l_connect = 0.0;
  double t_frag = 0.0;

  bool operator==(const ScoreVector&) const = default;
};

struct WeightVector {
  std::array<double, 4> beta{0.0, 0.0, 0.0, 0.0};  // d_known, delta_div, l_connect, t_frag
};
void validate(const WeightVector& weights);

// 1 - max Jaccard(tokens(H), tokens(K)) over the known hypotheses.
double d_known(const HypothesisState& state, std::span<const HypothesisState> known);
// Mean pairwise (1 - Jaccard) between fragment token sets; 0 below two fragments.
double delta_div(const HypothesisState& state);
// Largest connected component of the entity co-mention graph over all entities.
double l_connect(const HypothesisState& state, const Lexicon& lexicon);
// Share of fragments with at least one provenance entry.
double t_frag(const HypothesisState& state);

// Throws invalid_input for an empty state or an empty known list.
ScoreVector score_vector(const HypothesisState& state, std::span<const HypothesisState> known,
                         const Lexicon& lexicon);

double utility(const ScoreVector& score, const WeightVector& weights);

}  // namespace hypgame
