#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hypgame {

enum class EntityKind { gene, complex, family, chemical };

struct LexiconEntry {
  std::string surface;
  std::string canonical;
  EntityKind kind = EntityKind::gene;

  bool operator==(const LexiconEntry&) const = default;
};

using EntitySet = std::set<std::string>;

struct EntitySpan {
  std::size_t begin = 0;  // byte offsets into the normalized text
  std::size_t end = 0;
  std::string canonical;
  EntityKind kind = EntityKind::gene;

  bool operator==(const EntitySpan&) const = default;
};

// Surface forms are matched case-insensitively on normalized text. A later
// entry with an already known surface replaces the earlier one.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<LexiconEntry> entries);

  // One {surface, canonical, kind} object per line; blank lines skipped.
  static Lexicon read_jsonl(std::istream& in);
  static Lexicon load_jsonl(const std::filesystem::path& path);

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  const LexiconEntry* lookup(std::string_view surface) const;
  Lexicon restricted(EntityKind kind) const;

  // Greedy longest match at word boundaries (any character outside [a-z0-9]).
  std::vector<EntitySpan> tag_spans(std::string_view text) const;

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_surface_;
  std::vector<std::size_t> lengths_;  // distinct surface lengths, descending
};

EntitySet tag_entities(std::string_view text, const Lexicon& lexicon);

}  // namespace hypgame
