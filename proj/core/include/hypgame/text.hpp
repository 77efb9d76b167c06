#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hypgame {

// Lowercase (ASCII), collapse whitespace runs, strip both ends, drop trailing periods.
std::string normalize_statement(std::string_view text);

// Words of the normalized text with leading/trailing ASCII punctuation removed.
std::vector<std::string> tokenize(std::string_view text);

// Whitespace-split words of the normalized text, punctuation kept.
std::vector<std::string> split_words(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string to_hex(std::uint64_t value, int digits = 16);

std::string trim(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view separator);

}  // namespace hypgame
