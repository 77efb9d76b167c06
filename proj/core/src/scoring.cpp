#include "hypgame/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "hypgame/error.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

namespace {

using TokenSet = std::set<std::string>;

TokenSet tokens_of(std::string_view text) {
  auto t = tokenize(text);
  return TokenSet(t.begin(), t.end());
}

TokenSet tokens_of(const HypothesisState& state) {
  TokenSet out;
  for (const auto& f : state.fragments) {
    auto t = tokenize(f.text);
    out.insert(t.begin(), t.end());
  }
  return out;
}

double jaccard(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : a) common += b.count(t);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

void validate(const WeightVector& weights) {
  for (double b : weights.beta) {
    if (!std::isfinite(b)) throw Error(ErrorCode::invalid_input, "utility weights must be finite");
    if (b < 0.0) throw Error(ErrorCode::invalid_input, "utility weights must be non-negative");
  }
}

double d_known(const HypothesisState& state, std::span<const HypothesisState> known) {
  if (known.empty()) throw Error(ErrorCode::invalid_input, "d_known needs at least one known hypothesis");
  const TokenSet h = tokens_of(state);
  double best = 0.0;
  for (const auto& k : known) best = std::max(best, jaccard(h, tokens_of(k)));
  return 1.0 - best;
}

double delta_div(const HypothesisState& state) {
  const std::size_t n = state.fragments.size();
  if (n < 2) return 0.0;
  std::vector<TokenSet> sets;
  sets.reserve(n);
  for (const auto& f : state.fragments) sets.push_back(tokens_of(f.text));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += 1.0 - jaccard(sets[i], sets[j]);
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double l_connect(const HypothesisState& state, const Lexicon& lexicon) {
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> edges;
  for (const auto& f : state.fragments) {
    std::vector<std::size_t> members;
    for (const auto& e : tag_entities(f.text, lexicon)) {
      auto [it, _] = index.emplace(e, index.size());
      members.push_back(it->second);
    }
    edges.push_back(std::move(members));
  }
  const std::size_t n = index.size();
  if (n <= 1) return 1.0;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& members : edges) {
    for (std::size_t i = 1; i < members.size(); ++i) {
      parent[find_root(parent, members[i])] = find_root(parent, members[0]);
    }
  }
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++size[find_root(parent, i)];
  return static_cast<double>(*std::max_element(size.begin(), size.end())) / static_cast<double>(n);
}

double t_frag(const HypothesisState& state) {
  if (state.empty()) return 0.0;
  const auto backed = std::count_if(state.fragments.begin(), state.fragments.end(),
                                    [](const Fragment& f) { return !f.provenance.empty(); });
  return static_cast<double>(backed) / static_cast<double>(state.size());
}

ScoreVector score_vector(const HypothesisState& state, std::span<const HypothesisState> known,
                         const Lexicon& lexicon) {
  if (state.empty()) throw Error(ErrorCode::invalid_input, "cannot score an empty hypothesis");
  return {d_known(state, known), delta_div(state), l_connect(state, lexicon), t_frag(state)};
}

double utility(const ScoreVector& s, const WeightVector& w) {
  return w.beta[0] * s.d_known + w.beta[1] * s.delta_div + w.beta[2] * s.l_connect +
         w.beta[3] * s.t_frag;
}

}  // namespace hypgame
