#ifndef PRIME_UNICODE_HPP
#define PRIME_UNICODE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "prime/error.hpp"

namespace prime::unicode {

/// Decodes UTF-8 into code points. Ill-formed sequences become U+FFFD.
inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

inline void append(std::string& out, char32_t c) {
  uint8_t buf[4];
  int32_t len = 0;
  UBool err = false;
  U8_APPEND(buf, len, 4, static_cast<UChar32>(c), err);
  if (err) {
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

inline std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) append(out, c);
  return out;
}

/// Number of code points; used as the character length of a document.
inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0;
  const auto len = static_cast<int32_t>(s.size());
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    ++n;
  }
  return n;
}

// NFKC with case folding. Maps full-width latin and half-width katakana
// onto their canonical forms and lowercases latin text.
inline std::string normalize(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCCasefoldInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFKC_Casefold normalizer unavailable");
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString dst = nfkc->normalize(src, status);
  if (U_FAILURE(status)) throw Error("unicode normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

enum class CharClass { Kanji, Katakana, Hiragana, Latin, Digit, Other };

inline bool is_hiragana(char32_t c) { return c >= 0x3041 && c <= 0x309F; }

inline bool is_katakana(char32_t c) {
  // U+30A0 (double hyphen) and U+30FB (middle dot) are punctuation.
  return (c >= 0x30A1 && c <= 0x30FA) || (c >= 0x30FC && c <= 0x30FF) || (c >= 0x31F0 && c <= 0x31FF);
}

inline bool is_kanji(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
         (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x20000 && c <= 0x2FFFF) ||
         c == 0x3005 || c == 0x3006 || c == 0x3007;
}

/// Letters, digits and combining marks form words in the English path.
inline bool is_word_char(char32_t c) {
  const auto u = static_cast<UChar32>(c);
  if (u_isalnum(u)) return true;
  const auto cat = u_charType(u);
  return cat == U_NON_SPACING_MARK || cat == U_COMBINING_SPACING_MARK;
}

inline CharClass classify(char32_t c) {
  if (is_kanji(c)) return CharClass::Kanji;
  if (is_katakana(c)) return CharClass::Katakana;
  if (is_hiragana(c)) return CharClass::Hiragana;
  const auto u = static_cast<UChar32>(c);
  if (u_isdigit(u)) return CharClass::Digit;
  if (is_word_char(c)) return CharClass::Latin;
  return CharClass::Other;
}

inline bool is_katakana_word(std::string_view s) {
  if (s.empty()) return false;
  for (char32_t c : decode(s))
    if (!is_katakana(c)) return false;
  return true;
}

}  // namespace prime::unicode

#endif  // PRIME_UNICODE_HPP
