#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "hypgame/corruption.hpp"
#include "hypgame/serialization.hpp"

using namespace hypgame;

namespace {

const std::string mpp_original = "MPP cleaves targeting peptide (presequence) of inner membrane precursors";
const std::string mpp_corrupted = "MPP ligates targeting peptide to inner membrane precursors";

CorruptionEntry entry(ErrorType type, CorruptionOperation op, std::string original, std::string corrupted) {
  return {"p", 0, type, Difficulty::L1, op, std::move(original), std::move(corrupted)};
}

CorruptionPolicy policy(double fraction, std::uint64_t seed) {
  CorruptionPolicy p;
  p.fraction = fraction;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(Count, RoundHalfUpWithFloorOfOne) {
  EXPECT_EQ(corruption_count(0.3, 13), 4u);
  EXPECT_EQ(corruption_count(0.1, 13), 1u);
  EXPECT_EQ(corruption_count(0.01, 13), 1u);
  EXPECT_EQ(corruption_count(0.25, 10), 3u);
  EXPECT_EQ(corruption_count(0.2, 10), 2u);
}

TEST(Validate, Examples) {
  const auto lex = fixtures::lexicon();
  EXPECT_TRUE(validate_corruption(entry(ErrorType::wrong_relation, CorruptionOperation::replace, mpp_original,
                                        mpp_corrupted),
                                  &lex)
                  .empty());
  EXPECT_FALSE(validate_corruption(entry(ErrorType::wrong_entity, CorruptionOperation::replace,
                                         "TOMM40 binds TIMM22", "SAM50 binds TIMM23"),
                                   &lex)
                   .empty());
  EXPECT_TRUE(validate_corruption(entry(ErrorType::wrong_entity, CorruptionOperation::replace,
                                        "TOMM40 binds TIMM22", "TOMM40 binds TIMM23"),
                                  &lex)
                  .empty());
  EXPECT_FALSE(
      validate_corruption(entry(ErrorType::unsupported_step, CorruptionOperation::replace, "a b", "c d")).empty());
  EXPECT_FALSE(validate_corruption(entry(ErrorType::wrong_entity, CorruptionOperation::insert, "", "x")).empty());
  EXPECT_FALSE(
      validate_corruption(entry(ErrorType::wrong_relation, CorruptionOperation::replace, "a b", "a b")).empty());
}

TEST(Bank, LoadsAndRejectsWithLineNumber) {
  std::istringstream one(
      R"({"pathway_id":"p","anchor_index":0,"error_type":"wrong_relation","difficulty":"L1","operation":"replace","original":"A activates B","corrupted":"A inhibits B"})"
      "\n");
  EXPECT_EQ(read_bank(one).size(), 1u);
  std::istringstream bad(
      R"({"pathway_id":"p","anchor_index":0,"error_type":"wrong_relation","difficulty":"L1","operation":"replace","original":"A activates B","corrupted":"A inhibits B"})"
      "\n"
      R"({"pathway_id":"p","anchor_index":1,"error_type":"wrong_entity","difficulty":"L1","operation":"insert","original":"","corrupted":"X"})"
      "\n");
  try {
    read_bank(bad);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{2}));
  }
  EXPECT_GT(fixtures::bank().size(), 10u);
}

TEST(Plan, AppendixCountAndDeterminism) {
  const auto p13 = fixtures::pathway("mito13");
  const auto bank = fixtures::bank();
  const auto a = sample_plan(p13, bank, policy(0.3, 7));
  ASSERT_EQ(a.selections.size(), 4u);
  std::set<std::size_t> anchors;
  for (const auto& s : a.selections) anchors.insert(s.anchor_index);
  EXPECT_EQ(anchors.size(), 4u);
  EXPECT_TRUE(std::is_sorted(a.selections.begin(), a.selections.end(),
                             [](const auto& x, const auto& y) { return x.anchor_index < y.anchor_index; }));
  const auto b = sample_plan(p13, bank, policy(0.3, 7));
  EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
  EXPECT_EQ(sample_plan(p13, bank, policy(0.1, 7)).selections.size(), 1u);
}

TEST(Plan, FiltersByTypeAndRejectsShortBank) {
  const auto p13 = fixtures::pathway("mito13");
  const auto bank = fixtures::bank();
  auto pol = policy(0.1, 3);
  pol.error_type = ErrorType::wrong_relation;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    pol.seed = seed;
    for (const auto& s : sample_plan(p13, bank, pol).selections) EXPECT_EQ(s.error_type, ErrorType::wrong_relation);
  }
  try {
    sample_plan(p13, bank, policy(0.4, 1));
    sample_plan(fixtures::pathway("mito10"), bank, policy(0.4, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_bank);
  }
  EXPECT_THROW(validate(policy(0.9, 1)), Error);
  EXPECT_THROW(validate(policy(0.0, 1)), Error);
}

TEST(Apply, ReplaceTouchesOnlyItsStep) {
  const auto p14 = fixtures::pathway("mito14");
  std::size_t mpp = p14.size();
  for (std::size_t i = 0; i < p14.size(); ++i) {
    if (p14.fragments[i].text == mpp_original) mpp = i;
  }
  ASSERT_LT(mpp, p14.size());
  CorruptionPlan plan;
  plan.selections.push_back({p14.pathway_id, mpp, ErrorType::wrong_relation, Difficulty::L1,
                             CorruptionOperation::replace, mpp_original, mpp_corrupted});
  const auto r = apply_plan(p14, plan);
  ASSERT_EQ(r.corrupted.size(), p14.size());
  for (std::size_t i = 0; i < p14.size(); ++i) {
    if (i == mpp) {
      EXPECT_EQ(r.corrupted.fragments[i].text, mpp_corrupted);
      EXPECT_EQ(r.corrupted.fragments[i].id, p14.fragments[i].id);
    } else {
      EXPECT_EQ(r.corrupted.fragments[i].text, p14.fragments[i].text);
    }
  }
  ASSERT_EQ(r.applied.size(), 1u);
  EXPECT_EQ(r.applied[0].position, mpp);
  EXPECT_EQ(revert(r.corrupted, r.applied), p14);
}

TEST(Apply, EmptyPlanAndBoundaryInsert) {
  const auto p = fixtures::pathway("mito10");
  const auto same = apply_plan(p, CorruptionPlan{});
  EXPECT_EQ(same.corrupted, p);
  EXPECT_TRUE(same.applied.empty());

  CorruptionPlan plan;
  plan.selections.push_back({p.pathway_id, p.size() - 1, ErrorType::unsupported_step, Difficulty::L1,
                             CorruptionOperation::insert, "", "TIMM23 SORT degrades matrix proteins"});
  const auto r = apply_plan(p, plan);
  ASSERT_EQ(r.corrupted.size(), p.size() + 1);
  EXPECT_EQ(r.corrupted.fragments.back().text, "TIMM23 SORT degrades matrix proteins");
  EXPECT_EQ(revert(r.corrupted, r.applied), p);
}

TEST(Apply, RevertRestoresOriginalForSampledPlans) {
  const auto bank = fixtures::bank();
  for (const char* name : {"mito13", "mito14", "mito10"}) {
    const auto p = fixtures::pathway(name);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto plan = sample_plan(p, bank, policy(0.3, seed));
      const auto r = apply_plan(p, plan);
      EXPECT_EQ(r.applied.size(), plan.selections.size());
      for (const auto& a : r.applied) EXPECT_EQ(r.corrupted.fragments.at(a.position).text, a.corrupted);
      EXPECT_EQ(revert(r.corrupted, r.applied), p) << name << " seed " << seed;
    }
  }
}
