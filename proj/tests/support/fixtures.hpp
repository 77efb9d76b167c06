#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypgame/corpus.hpp"
#include "hypgame/corruption.hpp"
#include "hypgame/hypothesis.hpp"
#include "hypgame/lexicon.hpp"
#include "hypgame/serialization.hpp"

namespace fixtures {

inline std::filesystem::path dir() { return HYPGAME_FIXTURE_DIR; }

inline hypgame::HypothesisState pathway(const std::string& name) {
  std::ifstream in(dir() / (name + ".json"));
  return hypgame::parse_pathway(nlohmann::json::parse(in).get<hypgame::PathwayRecord>());
}

inline hypgame::Lexicon lexicon() { return hypgame::Lexicon::load_jsonl(dir() / "lexicon.jsonl"); }
inline hypgame::Corpus corpus() { return hypgame::Corpus::load_jsonl(dir() / "corpus.jsonl"); }
inline hypgame::CorruptionBank bank() {
  const auto lex = lexicon();
  return hypgame::load_bank(dir() / "bank.jsonl", &lex);
}

inline nlohmann::json mock_gateway_doc() {
  std::ifstream in(dir() / "mock_gateway.json");
  return nlohmann::json::parse(in);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hypgame-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline const std::vector<std::string>& statement_pool() {
  static const std::vector<std::string> pool = [] {
    std::vector<std::string> out;
    for (const auto& f : pathway("mito14").fragments) out.push_back(f.text);
    out.push_back("HSP70 binds unfolded precursor proteins");
    out.push_back("mtHSP70 hydrolyzes ATP to pull proteins into the matrix");
    out.push_back("Carrier proteins accumulate in the intermembrane space");
    out.push_back("TIMM13 and TIMM8 form a hexameric chaperone");
    return out;
  }();
  return pool;
}

// Random pathway of 1..max_len distinct statements drawn from the fixture pool.
template <class Gen>
hypgame::HypothesisState random_state(Gen& gen, std::size_t max_len = 8) {
  auto pool = statement_pool();
  std::shuffle(pool.begin(), pool.end(), gen);
  const std::size_t n = 1 + std::uniform_int_distribution<std::size_t>(0, std::min(max_len, pool.size()) - 1)(gen);
  hypgame::PathwayRecord rec{"Random pathway", {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n)}, "rand"};
  return hypgame::parse_pathway(rec);
}

}  // namespace fixtures
