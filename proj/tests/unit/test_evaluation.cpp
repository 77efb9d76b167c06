#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "fixtures.hpp"
#include "hypgame/evaluation.hpp"
#include "hypgame/text.hpp"
#include "oracles.hpp"

using namespace hypgame;

namespace {

HypothesisState state(std::vector<std::string> steps) { return parse_pathway({"s", std::move(steps), std::nullopt}); }

JudgeVerdict persisted(bool p) { return {"c", p, std::nullopt}; }

class ScriptedRecallJudge final : public RecallJudge {
 public:
  explicit ScriptedRecallJudge(std::vector<bool> hits) : hits_(std::move(hits)) {}
  RecallAttributes judge(std::string_view, const HypothesisState&) override {
    const bool h = hits_.at(next_++);
    return {h, h, h, h};
  }

 private:
  std::vector<bool> hits_;
  std::size_t next_ = 0;
};

class FailingRecallJudge final : public RecallJudge {
 public:
  RecallAttributes judge(std::string_view, const HypothesisState&) override {
    if (calls_++ == 1) throw Error(ErrorCode::gateway, "down");
    return {true, true, true, true};
  }

 private:
  int calls_ = 0;
};

const std::string mpp_original = "MPP cleaves targeting peptide (presequence) of inner membrane precursors";
const std::string mpp_corrupted = "MPP ligates targeting peptide to inner membrane precursors";

}  // namespace

TEST(Tagging, LongestMatchAndCanonicalization) {
  const Lexicon lex({{"ATP", "ATP", EntityKind::chemical},
                     {"glucose", "glucose", EntityKind::chemical},
                     {"glucose-6-phosphate", "glucose-6-phosphate", EntityKind::chemical},
                     {"HK1", "hexokinase 1", EntityKind::gene}});
  EXPECT_EQ(tag_entities("ATP phosphorylates glucose to form glucose-6-phosphate.", lex),
            (EntitySet{"ATP", "glucose", "glucose-6-phosphate"}));
  EXPECT_EQ(tag_entities("glucose-6-phosphate accumulates", lex), (EntitySet{"glucose-6-phosphate"}));
  EXPECT_TRUE(tag_entities("", lex).empty());
  EXPECT_EQ(tag_entities("HK1 acts", lex), (EntitySet{"hexokinase 1"}));
  EXPECT_TRUE(tag_entities("HK12 acts", lex).empty());
}

TEST(EntityPrf, Examples) {
  EXPECT_EQ(entity_prf({"a", "b"}, {"a", "b"}), (PRF{1, 1, 1}));
  const auto p = entity_prf({"a", "b", "c"}, {"b", "c", "d"});
  EXPECT_DOUBLE_EQ(p.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.f1, 2.0 / 3.0);
  EXPECT_EQ(entity_prf({}, {}), (PRF{1, 1, 1}));
  EXPECT_EQ(entity_prf({"a"}, {}).recall, 0.0);
}

TEST(EntityPrf, MatchesSetOracle) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 1000; ++i) {
    EntitySet a, b;
    for (int k = 0; k < 8; ++k) {
      if (gen() % 2) a.insert("e" + std::to_string(k));
      if (gen() % 2) b.insert("e" + std::to_string(k));
    }
    const auto got = entity_prf(a, b);
    const auto want = oracle::set_prf(a, b);
    EXPECT_NEAR(got.precision, want.precision, 1e-12);
    EXPECT_NEAR(got.recall, want.recall, 1e-12);
    EXPECT_NEAR(got.f1, want.f1, 1e-12);
  }
}

TEST(Persistence, RuleJudgeExamples) {
  RulePersistenceJudge judge;
  EXPECT_TRUE(judge_persistence(mpp_original, mpp_corrupted, state({"TOM imports", mpp_corrupted}), judge));
  EXPECT_FALSE(judge_persistence(mpp_original, mpp_corrupted, state({mpp_original}), judge));
  EXPECT_FALSE(judge_persistence(mpp_original, mpp_corrupted, state({"TOM imports"}), judge));
}

TEST(Persistence, RatesComplement) {
  const std::vector<JudgeVerdict> none{persisted(false), persisted(false), persisted(false)};
  EXPECT_EQ(error_removal_rate(none), 1.0);
  const std::vector<JudgeVerdict> all{persisted(true), persisted(true)};
  EXPECT_EQ(error_removal_rate(all), 0.0);
  const std::vector<JudgeVerdict> half{persisted(false), persisted(true), persisted(false), persisted(true)};
  EXPECT_EQ(error_removal_rate(half), 0.5);
  EXPECT_EQ(error_removal_rate(half) + persistence_rate(half), 1.0);
  EXPECT_THROW(error_removal_rate(std::vector<JudgeVerdict>{}), Error);
  EXPECT_THROW(validate(JudgeVerdict{"x", std::nullopt, std::nullopt}), Error);
}

TEST(DetailedRecall, Examples) {
  const std::vector<std::string> reactions{"A activates B", "B inhibits C", "C binds D", "D cleaves E"};
  RuleRecallJudge rule;
  const auto full = detailed_recall(reactions, state(reactions), rule);
  EXPECT_EQ(full.input_entities, 1.0);
  EXPECT_EQ(full.reaction_type, 1.0);
  ASSERT_EQ(full.verdicts.size(), 4u);
  EXPECT_EQ(full.verdicts[2].item_id, "r2");

  const auto empty = detailed_recall(reactions, HypothesisState{}, rule);
  EXPECT_EQ(empty.directionality, 0.0);
  EXPECT_EQ(empty.output_entities, 0.0);

  ScriptedRecallJudge scripted({true, false, true, false});
  const auto half = detailed_recall(reactions, state({"anything"}), scripted);
  EXPECT_EQ(half.input_entities, 0.5);
  EXPECT_EQ(half.output_entities, 0.5);
  EXPECT_EQ(half.directionality, 0.5);
  EXPECT_EQ(half.reaction_type, 0.5);
}

TEST(DetailedRecall, KeepsPartialVerdictsOnJudgeFailure) {
  const std::vector<std::string> reactions{"A activates B", "B inhibits C", "C binds D"};
  FailingRecallJudge judge;
  try {
    detailed_recall(reactions, state({"A activates B"}), judge);
    FAIL();
  } catch (const PartialJudgingError& e) {
    EXPECT_EQ(e.partial().size(), 1u);
  }
}

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshtein_word_norm("MPP cleaves targeting peptide", "MPP cleaves targeting peptide"), 0.0);
  EXPECT_DOUBLE_EQ(levenshtein_word_norm("MPP cleaves targeting peptide", "MPP ligates targeting peptide"), 0.25);
  EXPECT_EQ(levenshtein_word_norm("word", ""), 1.0);
  EXPECT_THROW(levenshtein_word_norm("", "word"), Error);
}

TEST(Levenshtein, MatchesRecursiveOracle) {
  std::mt19937_64 gen(29);
  const std::vector<std::string> vocab{"a", "b", "c", "d"};
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> a(gen() % 9), b(gen() % 9);
    for (auto& w : a) w = vocab[gen() % vocab.size()];
    for (auto& w : b) w = vocab[gen() % vocab.size()];
    EXPECT_EQ(levenshtein_words(a, b), oracle::edit_distance_recursive(a, b));
    EXPECT_EQ(levenshtein_words(a, b), levenshtein_words(b, a));
  }
}

TEST(Drift, Examples) {
  const auto lex = fixtures::lexicon();
  const auto ref = state({"TOMM40 binds TIMM22"});
  EXPECT_EQ(entity_drift(ref, ref, lex), (EntityDrift{0, 0}));
  EXPECT_EQ(entity_drift(ref, state({"TOMM40 binds TIMM23"}), lex), (EntityDrift{1, 1}));
  EXPECT_EQ(entity_drift(ref, state({"TOMM40 binds TIMM22", "SAM50 folds"}), lex), (EntityDrift{1, 0}));
}

TEST(Alpha, Examples) {
  LabelMatrix perfect{{"a", "b"}, {"1", "2", "3", "4"}, {{1, 0, 1, 0}, {1, 0, 1, 0}}};
  EXPECT_NEAR(krippendorff_alpha(perfect), 1.0, 1e-12);
  LabelMatrix m{{"a", "b"}, {"1", "2", "3", "4", "5"}, {{1, 0, 1, 0, 1}, {1, 0, 0, 0, 1}}};
  EXPECT_NEAR(krippendorff_alpha(m), 0.64, 1e-12);
  LabelMatrix flat{{"a", "b"}, {"1", "2"}, {{1, 1}, {1, 1}}};
  try {
    krippendorff_alpha(flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_metric);
  }
  LabelMatrix sparse{{"a", "b"}, {"1", "2"}, {{1, std::nullopt}, {0, 1}}};
  EXPECT_THROW(krippendorff_alpha(sparse), Error);
}

TEST(Alpha, MatchesPairwiseOracleWithMissingLabels) {
  std::mt19937_64 gen(31);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t raters = 2 + gen() % 3, items = 2 + gen() % 8;
    LabelMatrix m;
    for (std::size_t r = 0; r < raters; ++r) m.raters.push_back("r" + std::to_string(r));
    for (std::size_t u = 0; u < items; ++u) m.items.push_back("u" + std::to_string(u));
    m.labels.assign(raters, std::vector<Label>(items));
    for (auto& row : m.labels) {
      for (auto& l : row) {
        if (gen() % 5) l = static_cast<int>(gen() % 3);
      }
    }
    double want;
    try {
      want = oracle::alpha_pairwise(m.labels);
    } catch (...) {
      continue;
    }
    try {
      const double got = krippendorff_alpha(m);
      EXPECT_NEAR(got, want, 1e-9);
      ++checked;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(Consensus, StrictAnd) {
  const std::vector<Label> a{1, 1, 0, std::nullopt};
  const std::vector<Label> b{1, 0, 0, 1};
  EXPECT_EQ(strict_consensus(a, b), (std::vector<Label>{1, 0, 0, std::nullopt}));
}
