#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace hypgame {

enum class DocumentKind { abstract, fulltext };

struct CorpusDocument {
  std::string doc_id;
  std::string title;
  std::string text;
  DocumentKind kind = DocumentKind::abstract;

  bool operator==(const CorpusDocument&) const = default;
};

struct Corpus {
  std::string name;
  std::vector<CorpusDocument> documents;

  bool empty() const noexcept { return documents.empty(); }

  // One {doc_id, title, text, kind} object per line; blank lines skipped.
  static Corpus read_jsonl(std::istream& in, std::string name = {});
  static Corpus load_jsonl(const std::filesystem::path& path);
};

}  // namespace hypgame
