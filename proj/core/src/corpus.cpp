#include "hypgame/corpus.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "hypgame/error.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

Corpus Corpus::read_jsonl(std::istream& in, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      corpus.documents.push_back(nlohmann::json::parse(line).get<CorpusDocument>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError("corpus line " + std::to_string(line_no) + ": " + e.what(), {line_no});
    }
  }
  return corpus;
}

Corpus Corpus::load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read corpus " + path.string());
  return read_jsonl(in, path.stem().string());
}

}  // namespace hypgame
