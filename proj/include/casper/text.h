#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace casper {

using Tokens = std::vector<std::string>;

/// Lowercases and splits UTF-8 text into word tokens.
///
/// Separators are whitespace, ASCII punctuation and the common Unicode
/// punctuation blocks (general punctuation, CJK symbols, fullwidth forms).
/// A hyphen or apostrophe between two word characters stays inside the
/// token, so "Laid-Back" -> "laid-back" and "I'll" -> "i'll".
/// Lowercasing covers ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
Tokens tokenize(std::string_view text);

/// Tokenize then join with single spaces. Used to canonicalize phrases.
std::string normalize_phrase(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string trim(std::string_view s);

/// 64-bit FNV-1a. Stable across platforms; used for held-out assignment.
std::uint64_t fnv1a64(std::string_view data);

} // namespace casper
