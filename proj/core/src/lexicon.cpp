#include "hypgame/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include "hypgame/error.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

namespace {

bool is_word_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

}  // namespace

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const std::string key = normalize_statement(entries_[i].surface);
    if (key.empty()) throw Error(ErrorCode::invalid_input, "lexicon entry with empty surface form");
    by_surface_[key] = i;
  }
  for (const auto& [key, _] : by_surface_) lengths_.push_back(key.size());
  std::sort(lengths_.begin(), lengths_.end(), std::greater<>());
  lengths_.erase(std::unique(lengths_.begin(), lengths_.end()), lengths_.end());
}

Lexicon Lexicon::read_jsonl(std::istream& in) {
  std::vector<LexiconEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      entries.push_back(nlohmann::json::parse(line).get<LexiconEntry>());
    } catch (const std::exception& e) {
      throw InputError("lexicon line " + std::to_string(line_no) + ": " + e.what(), {line_no});
    }
  }
  return Lexicon(std::move(entries));
}

Lexicon Lexicon::load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read lexicon " + path.string());
  return read_jsonl(in);
}

const LexiconEntry* Lexicon::lookup(std::string_view surface) const {
  auto it = by_surface_.find(normalize_statement(surface));
  return it == by_surface_.end() ? nullptr : &entries_[it->second];
}

Lexicon Lexicon::restricted(EntityKind kind) const {
  std::vector<LexiconEntry> kept;
  for (const auto& e : entries_) {
    if (e.kind == kind) kept.push_back(e);
  }
  return Lexicon(std::move(kept));
}

std::vector<EntitySpan> Lexicon::tag_spans(std::string_view text) const {
  std::vector<EntitySpan> spans;
  if (by_surface_.empty()) return spans;
  const std::string norm = normalize_statement(text);
  std::size_t i = 0;
  while (i < norm.size()) {
    if (i > 0 && is_word_char(norm[i - 1])) {
      ++i;
      continue;
    }
    bool matched = false;
    for (std::size_t len : lengths_) {
      if (i + len > norm.size()) continue;
      if (i + len < norm.size() && is_word_char(norm[i + len])) continue;
      auto it = by_surface_.find(norm.substr(i, len));
      if (it == by_surface_.end()) continue;
      const auto& e = entries_[it->second];
      spans.push_back({i, i + len, e.canonical, e.kind});
      i += len;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return spans;
}

EntitySet tag_entities(std::string_view text, const Lexicon& lexicon) {
  EntitySet out;
  for (auto& span : lexicon.tag_spans(text)) out.insert(std::move(span.canonical));
  return out;
}

}  // namespace hypgame
