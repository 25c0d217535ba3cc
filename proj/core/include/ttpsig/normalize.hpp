#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ttpsig {

/// A case- and whitespace-folded view of a UTF-8 string that remembers where
/// every output byte came from in the source.
///
/// Folding is applied per canonical-composition segment: NFC, simple
/// lowercase mapping, NFC again. Runs of whitespace become a single ' '.
/// Byte i of `text` was produced by the source range
/// [source_begin[i], source_end[i]).
struct NormalizedText {
  std::string text;
  std::vector<std::uint32_t> source_begin;
  std::vector<std::uint32_t> source_end;
};

NormalizedText normalize_text(std::string_view utf8);

/// Canonical key for alias lookup: normalize_text, then strip leading and
/// trailing whitespace and punctuation. Idempotent.
std::string normalize_alias(std::string_view utf8);

/// True when the code point counts as part of a word (letter or digit).
bool is_word_char(char32_t cp) noexcept;

/// Decode the code point ending just before byte offset `pos` of a valid
/// UTF-8 string. Returns 0 when pos == 0.
char32_t code_point_before(std::string_view utf8, std::size_t pos) noexcept;

/// Decode the code point starting at byte offset `pos`. Returns 0 at the end.
char32_t code_point_at(std::string_view utf8, std::size_t pos) noexcept;

}  // namespace ttpsig
