#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hypgame/hypothesis.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

using namespace hypgame;

namespace {

HypothesisState three() {
  return parse_pathway({"demo", {"A activates B", "B inhibits C", "C binds D"}, std::nullopt});
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::io;
}

}  // namespace

TEST(Normalize, LowercasesCollapsesAndDropsTerminalPeriod) {
  EXPECT_EQ(normalize_statement("  MPP cleaves  Peptide."), "mpp cleaves peptide");
  EXPECT_EQ(normalize_statement(""), "");
  EXPECT_EQ(normalize_statement("A activates B"), "a activates b");
  EXPECT_EQ(normalize_statement("\tX\n binds   Y ..."), "x binds y");
}

TEST(Normalize, IsIdempotent) {
  std::mt19937_64 gen(3);
  const std::string alphabet = "aB .\t\nZ,;:.";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t n = gen() % 20;
    for (std::size_t j = 0; j < n; ++j) s.push_back(alphabet[gen() % alphabet.size()]);
    const auto once = normalize_statement(s);
    EXPECT_EQ(normalize_statement(once), once) << s;
  }
}

TEST(Text, TokenizeStripsOuterPunctuation) {
  EXPECT_EQ(tokenize("MPP cleaves (presequence) peptides."),
            (std::vector<std::string>{"mpp", "cleaves", "presequence", "peptides"}));
  EXPECT_EQ(split_words("MPP cleaves (presequence)"), (std::vector<std::string>{"mpp", "cleaves", "(presequence)"}));
}

TEST(Text, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(to_hex(0xabcULL, 4), "0abc");
}

TEST(ParsePathway, OneFragmentPerStep) {
  const auto s = parse_pathway({"glycolysis-demo", {"ATP phosphorylates glucose to form glucose-6-phosphate."}, std::nullopt});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.fragments[0].step_index, 0u);
  EXPECT_EQ(s.fragments[0].kind, FragmentKind::claim);
  ASSERT_EQ(s.fragments[0].provenance.size(), 1u);
  EXPECT_EQ(s.fragments[0].provenance[0].source, EvidenceSource::seed_input);
  EXPECT_EQ(s.round, 0u);
  EXPECT_EQ(s.pathway_id, "glycolysis-demo");
}

TEST(ParsePathway, RejectsDegenerateInput) {
  EXPECT_EQ(code_of([] { parse_pathway({"p", {}, std::nullopt}); }), ErrorCode::invalid_input);
  EXPECT_EQ(code_of([] { parse_pathway({"", {"A activates B"}, std::nullopt}); }), ErrorCode::invalid_input);
  try {
    parse_pathway({"p", {"A activates B", "A  activates B"}, std::nullopt});
    FAIL() << "duplicate accepted";
  } catch (const InputError& e) {
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{0, 1}));
  }
}

TEST(ParsePathway, DeterministicAndRoundTrips) {
  const auto a = fixtures::pathway("mito14");
  const auto b = fixtures::pathway("mito14");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.pathway_id, "R-HSA-1268020");
  EXPECT_EQ(parse_pathway(to_pathway_record(a)), a);
}

TEST(Invariants, DetectsBrokenStates) {
  auto s = three();
  EXPECT_TRUE(invariant_violations(s).empty());
  s.fragments[1].id = s.fragments[0].id;
  EXPECT_FALSE(invariant_violations(s).empty());
  s = three();
  s.fragments[2].step_index = 0;
  EXPECT_FALSE(invariant_violations(s).empty());
  s = three();
  s.fragments[2].text = "a activates b.";
  EXPECT_FALSE(invariant_violations(s).empty());
  s = three();
  s.fragments[0].kind = FragmentKind::triple;
  EXPECT_THROW(validate(s), Error);
  s.fragments[0].triple = Triple{"A", "activates", "B"};
  EXPECT_NO_THROW(validate(s));
  EXPECT_THROW(validate(EvidenceRef{EvidenceSource::corpus_doc, std::nullopt, std::nullopt}), Error);
}

TEST(Diff, Examples) {
  const auto before = three();
  EXPECT_TRUE(diff_states(before, before).empty());

  auto removed = before;
  removed.fragments.erase(removed.fragments.begin() + 2);
  const auto d1 = diff_states(before, removed);
  ASSERT_EQ(d1.ops.size(), 1u);
  ASSERT_TRUE(std::holds_alternative<RemoveOp>(d1.ops[0]));
  EXPECT_EQ(std::get<RemoveOp>(d1.ops[0]).fragment_id, "s2");

  auto replaced = before;
  replaced.fragments[1].text = "B activates C";
  const auto d2 = diff_states(before, replaced);
  ASSERT_EQ(d2.ops.size(), 1u);
  ASSERT_TRUE(std::holds_alternative<ReplaceOp>(d2.ops[0]));
  EXPECT_EQ(apply_delta(before, d2), replaced);
}

TEST(Diff, RoundTripOnRandomEdits) {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 1000; ++i) {
    const auto before = fixtures::random_state(gen, 10);
    HypothesisState after = before;
    for (auto it = after.fragments.begin(); it != after.fragments.end();) {
      it = gen() % 4 == 0 ? after.fragments.erase(it) : it + 1;
    }
    for (auto& f : after.fragments) {
      if (gen() % 5 == 0) f.text += " in vivo";
    }
    const std::size_t adds = gen() % 3;
    for (std::size_t k = 0; k < adds; ++k) {
      const std::string text = "novel statement " + std::to_string(i) + "-" + std::to_string(k);
      const std::size_t pos = after.fragments.empty() ? 0 : gen() % (after.fragments.size() + 1);
      after.fragments.insert(after.fragments.begin() + static_cast<std::ptrdiff_t>(pos),
                             make_claim(fresh_fragment_id(after, text), text, {}, 0));
    }
    for (std::size_t k = 0; k < after.fragments.size(); ++k) after.fragments[k].step_index = 10 * k;
    if (after.fragments.empty()) continue;
    const auto delta = diff_states(before, after);
    EXPECT_NO_THROW(validate(delta));
    EXPECT_EQ(apply_delta(before, delta), after) << "case " << i;
  }
}

TEST(ApplyDelta, Contracts) {
  const auto s = three();
  EXPECT_EQ(apply_delta(s, {}), s);
  EXPECT_EQ(code_of([&] { apply_delta(s, {{RemoveOp{"nope"}}}); }), ErrorCode::unknown_id);
  EXPECT_EQ(code_of([&] { apply_delta(s, {{AddOp{make_claim("x", "A  ACTIVATES B.", {}, 9), 3}}}); }),
            ErrorCode::invariant_violation);
  EXPECT_EQ(code_of([&] { apply_delta(s, {{AddOp{make_claim("x", "new", {}, 9), 7}}}); }),
            ErrorCode::out_of_bounds);
  EXPECT_THROW(validate(DeltaSet{{RemoveOp{"s0"}, ReplaceOp{"s0", make_claim("s0", "t", {}, 0)}}}), Error);
}

TEST(ApplyDelta, InsertionWithoutGapShiftsLaterIndices) {
  const auto s = three();
  const auto out = apply_delta(s, {{AddOp{make_claim("n", "new step", {}, 1), 1}}});
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out.fragments[1].id, "n");
  EXPECT_TRUE(invariant_violations(out).empty());
  EXPECT_TRUE(same_content(out.fragments[2], s.fragments[1]));
}

TEST(EnforceConsistency, CleanStateIsNoOp) {
  const auto s = three();
  const auto r = enforce_consistency(s, s.ids());
  EXPECT_EQ(r.state, s);
  EXPECT_TRUE(r.violations.empty());
}

TEST(EnforceConsistency, DropsInRegionDuplicate) {
  auto s = three();
  s.fragments.push_back(make_claim("dup", "c binds d.", {}, 3));
  const auto r = enforce_consistency(s, {"s2", "dup"});
  EXPECT_EQ(r.state.size(), 3u);
  EXPECT_EQ(r.violations.size(), 1u);
  EXPECT_TRUE(r.violations[0].repaired);
  EXPECT_EQ(r.state.fragments[0], s.fragments[0]);
  EXPECT_EQ(r.state.fragments[1], s.fragments[1]);
}

TEST(EnforceConsistency, ReportsCrossBoundaryDuplicate) {
  auto s = three();
  s.fragments.push_back(make_claim("dup", "A activates B", {}, 3));
  const auto r = enforce_consistency(s, {"dup"});
  EXPECT_EQ(r.state.size(), 4u);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_FALSE(r.violations[0].repaired);
  EXPECT_EQ(r.state.fragments[0], s.fragments[0]);
}

TEST(EnforceConsistency, LeavesOutsideFragmentsByteIdentical) {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 500; ++i) {
    auto s = fixtures::random_state(gen, 8);
    for (auto& f : s.fragments) f.step_index = gen() % 5;
    std::set<std::string> region;
    for (const auto& f : s.fragments) {
      if (gen() % 2) region.insert(f.id);
    }
    const auto r = enforce_consistency(s, region);
    for (const auto& f : s.fragments) {
      if (region.count(f.id)) continue;
      const Fragment* g = r.state.find(f.id);
      ASSERT_NE(g, nullptr);
      EXPECT_EQ(*g, f);
    }
  }
}

TEST(FreshId, DeterministicAndCollisionFree) {
  const auto s = three();
  const auto a = fresh_fragment_id(s, "Some statement");
  EXPECT_EQ(a, fresh_fragment_id(s, "some   statement."));
  EXPECT_FALSE(s.find(a));
  const auto b = fresh_fragment_id(s, "Some statement", {a});
  EXPECT_NE(a, b);
}

TEST(SameHypothesis, ComparesNormalizedTextInOrder) {
  auto a = three();
  auto b = three();
  b.fragments[0].id = "other";
  b.fragments[0].text = "a ACTIVATES b.";
  EXPECT_TRUE(same_hypothesis(a, b));
  std::swap(b.fragments[0].text, b.fragments[1].text);
  EXPECT_FALSE(same_hypothesis(a, b));
}

TEST(Serialization, FragmentAndDeltaRoundTrip) {
  auto s = three();
  s.fragments[1].kind = FragmentKind::triple;
  s.fragments[1].triple = Triple{"B", "inhibits", "C"};
  s.fragments[1].provenance.push_back({EvidenceSource::corpus_doc, "pmid:1", "snippet"});
  const nlohmann::json j = s;
  EXPECT_EQ(j.get<HypothesisState>(), s);
  const DeltaSet d{{AddOp{make_claim("n", "new", {}, 4), 1}, RemoveOp{"s0"}, ReplaceOp{"s2", s.fragments[2]}}};
  const nlohmann::json jd = d;
  EXPECT_EQ(jd.get<DeltaSet>(), d);
}
