#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hypgame/evaluation.hpp"
#include "hypgame/lexicon.hpp"

using namespace hypgame;

namespace {

std::vector<std::string> random_words(std::mt19937_64& gen, std::size_t n) {
  static const std::vector<std::string> vocab{"mpp", "cleaves", "targeting", "peptide", "inner", "membrane",
                                              "precursors", "timm23", "sort", "inserts", "proteins"};
  std::vector<std::string> out(n);
  for (auto& w : out) w = vocab[gen() % vocab.size()];
  return out;
}

void BM_LevenshteinWords(benchmark::State& state) {
  std::mt19937_64 gen(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_words(gen, n);
  const auto b = random_words(gen, n);
  for (auto _ : state) benchmark::DoNotOptimize(levenshtein_words(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LevenshteinWords)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_TagEntities(benchmark::State& state) {
  const auto lexicon = fixtures::lexicon();
  const auto pathway = fixtures::pathway("mito14");
  std::string text;
  for (const auto& f : pathway.fragments) text += f.text + ". ";
  for (auto _ : state) benchmark::DoNotOptimize(tag_entities(text, lexicon));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_TagEntities);

void BM_KrippendorffAlpha(benchmark::State& state) {
  std::mt19937_64 gen(2);
  LabelMatrix m;
  const auto items = static_cast<std::size_t>(state.range(0));
  m.raters = {"a", "b", "c"};
  for (std::size_t u = 0; u < items; ++u) m.items.push_back("u" + std::to_string(u));
  m.labels.assign(3, std::vector<Label>(items));
  for (auto& row : m.labels) {
    for (auto& l : row) {
      if (gen() % 10) l = static_cast<int>(gen() % 4);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(krippendorff_alpha(m));
}
BENCHMARK(BM_KrippendorffAlpha)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace
