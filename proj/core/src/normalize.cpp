#include "ttpsig/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace ttpsig {
namespace {

const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
    return n;
  }();
  return *instance;
}

bool is_space(UChar32 cp) { return u_isUWhiteSpace(cp); }

void append(NormalizedText& out, std::string_view bytes, std::uint32_t begin,
            std::uint32_t end) {
  out.text.append(bytes);
  out.source_begin.insert(out.source_begin.end(), bytes.size(), begin);
  out.source_end.insert(out.source_end.end(), bytes.size(), end);
}

// NFC -> lowercase -> NFC on one composition segment.
std::string fold_segment(std::string_view seg) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(seg.data(), static_cast<int32_t>(seg.size())));
  s = nfc().normalize(s, status);
  icu::UnicodeString lowered;
  for (int32_t i = 0; i < s.length();) {
    UChar32 cp = s.char32At(i);
    lowered.append(static_cast<UChar32>(u_tolower(cp)));
    i += U16_LENGTH(cp);
  }
  lowered = nfc().normalize(lowered, status);
  if (U_FAILURE(status)) return std::string(seg);
  std::string out;
  lowered.toUTF8String(out);
  return out;
}

}  // namespace

NormalizedText normalize_text(std::string_view utf8) {
  NormalizedText out;
  out.text.reserve(utf8.size());
  out.source_begin.reserve(utf8.size());
  out.source_end.reserve(utf8.size());

  const auto* bytes = reinterpret_cast<const std::uint8_t*>(utf8.data());
  const auto len = static_cast<std::int32_t>(utf8.size());
  const icu::Normalizer2& norm = nfc();

  std::int32_t i = 0;
  while (i < len) {
    const std::int32_t start = i;

    // Fast path: an ASCII byte not followed by a combining sequence is its
    // own NFC segment.
    if (bytes[i] < 0x80 && (i + 1 == len || bytes[i + 1] < 0x80)) {
      char ch = static_cast<char>(bytes[i]);
      if (ch == ' ' || (ch >= '\t' && ch <= '\r')) {
        // Falls through to the whitespace-run handling below.
      } else {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
        append(out, std::string_view(&ch, 1), static_cast<std::uint32_t>(i),
               static_cast<std::uint32_t>(i + 1));
        ++i;
        continue;
      }
    }

    UChar32 cp;
    std::int32_t next = i;
    U8_NEXT(bytes, next, len, cp);

    if (cp >= 0 && is_space(cp)) {
      std::int32_t end = next;
      while (end < len) {
        std::int32_t probe = end;
        UChar32 c2;
        U8_NEXT(bytes, probe, len, c2);
        if (c2 < 0 || !is_space(c2)) break;
        end = probe;
      }
      append(out, " ", static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(end));
      i = end;
      continue;
    }

    // Extend the segment until the next code point that starts a new
    // composition segment (or whitespace).
    std::int32_t end = next;
    while (end < len) {
      std::int32_t probe = end;
      UChar32 c2;
      U8_NEXT(bytes, probe, len, c2);
      if (c2 < 0 || is_space(c2) || norm.hasBoundaryBefore(c2)) break;
      end = probe;
    }
    const std::string folded = fold_segment(utf8.substr(start, end - start));
    append(out, folded, static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(end));
    i = end;
  }
  return out;
}

std::string normalize_alias(std::string_view utf8) {
  std::string s = normalize_text(utf8).text;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto len = static_cast<std::int32_t>(s.size());

  auto strippable = [](UChar32 cp) { return cp < 0 || is_space(cp) || u_ispunct(cp); };

  std::int32_t begin = 0;
  while (begin < len) {
    std::int32_t probe = begin;
    UChar32 cp;
    U8_NEXT(bytes, probe, len, cp);
    if (!strippable(cp)) break;
    begin = probe;
  }
  std::int32_t end = len;
  while (end > begin) {
    std::int32_t probe = end;
    UChar32 cp;
    U8_PREV(bytes, 0, probe, cp);
    if (!strippable(cp)) break;
    end = probe;
  }
  return s.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin));
}

bool is_word_char(char32_t cp) noexcept { return u_isalnum(static_cast<UChar32>(cp)); }

char32_t code_point_before(std::string_view utf8, std::size_t pos) noexcept {
  if (pos == 0) return 0;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(utf8.data());
  auto i = static_cast<std::int32_t>(pos);
  UChar32 cp;
  U8_PREV(bytes, 0, i, cp);
  return cp < 0 ? 0xFFFD : static_cast<char32_t>(cp);
}

char32_t code_point_at(std::string_view utf8, std::size_t pos) noexcept {
  if (pos >= utf8.size()) return 0;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(utf8.data());
  auto i = static_cast<std::int32_t>(pos);
  UChar32 cp;
  U8_NEXT(bytes, i, static_cast<std::int32_t>(utf8.size()), cp);
  return cp < 0 ? 0xFFFD : static_cast<char32_t>(cp);
}

}  // namespace ttpsig
