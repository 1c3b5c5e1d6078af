#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hebkit {

// Hebrew-specific codepoints used by the pre-tokenizer.
inline constexpr char32_t kGeresh = U'׳';     // Hebrew punctuation geresh
inline constexpr char32_t kGershayim = U'״';  // Hebrew punctuation gershayim
inline constexpr char32_t kSofPasuq = U'׃';

inline constexpr bool is_hebrew_letter(char32_t cp) {
  return cp >= 0x05D0 && cp <= 0x05EA;
}

inline constexpr bool is_ascii_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

inline constexpr bool is_whitespace(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x0085: case 0x00A0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline constexpr bool is_control(char32_t cp) {
  return (cp < 0x20 && cp != U'\t' && cp != U'\n' && cp != U'\r') ||
         (cp >= 0x7F && cp <= 0x9F);
}

// Combining marks pass through as part of the word they attach to.
inline constexpr bool is_combining_mark(char32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036F) ||  // generic diacritics
         (cp >= 0x0591 && cp <= 0x05C7 && cp != 0x05C3 && cp != 0x05C6) ||
         (cp >= 0x20D0 && cp <= 0x20FF) || (cp >= 0xFE20 && cp <= 0xFE2F);
}

inline constexpr bool is_latin_letter(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z') ||
         (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7);
}

// Coarse letter test over the major scripts; enough for the cleaner's
// script-ratio heuristic and the pre-tokenizer's word formation.
inline constexpr bool is_letter(char32_t cp) {
  if (is_latin_letter(cp) || is_hebrew_letter(cp)) return true;
  if (cp >= 0x05F0 && cp <= 0x05F2) return true;  // Hebrew ligatures
  if (cp >= 0x0370 && cp <= 0x03FF) return true;  // Greek
  if (cp >= 0x0400 && cp <= 0x052F) return true;  // Cyrillic
  if (cp >= 0x0530 && cp <= 0x058F) return true;  // Armenian
  if (cp >= 0x0600 && cp <= 0x06FF && !(cp >= 0x0600 && cp <= 0x061F) &&
      !(cp >= 0x0660 && cp <= 0x066D) && !(cp >= 0x06D4 && cp <= 0x06ED))
    return true;                                   // Arabic letters, roughly
  if (cp >= 0x0900 && cp <= 0x0DFF) return true;  // Indic
  if (cp >= 0x0E00 && cp <= 0x0EFF) return true;  // Thai/Lao
  if (cp >= 0x10A0 && cp <= 0x10FF) return true;  // Georgian
  if (cp >= 0x3040 && cp <= 0x30FF && cp != 0x3097 && cp != 0x3098) return true;  // Kana
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;  // CJK
  if (cp >= 0xAC00 && cp <= 0xD7AF) return true;  // Hangul
  return false;
}

inline constexpr bool is_hebrew_or_latin_letter(char32_t cp) {
  return is_hebrew_letter(cp) || (cp >= 0x05F0 && cp <= 0x05F2) || is_latin_letter(cp);
}

inline constexpr bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
           (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
  }
  if (cp == kGeresh || cp == kGershayim || cp == kSofPasuq) return true;
  if (cp == 0x05BE || cp == 0x05C0 || cp == 0x05C6) return true;  // maqaf, paseq, nun hafukha
  if (cp >= 0x2010 && cp <= 0x2027) return true;   // dashes, quotes, ellipsis
  if (cp >= 0x2030 && cp <= 0x205E) return true;
  if (cp == 0x00A1 || cp == 0x00A7 || cp == 0x00AB || cp == 0x00BB ||
      cp == 0x00B6 || cp == 0x00B7 || cp == 0x00BF)
    return true;
  if (cp >= 0x3001 && cp <= 0x3011) return true;   // CJK punctuation
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;   // fullwidth ASCII punct
  return false;
}

// --- UTF-8 ---

struct DecodedChar {
  char32_t cp;
  uint32_t bytes;  // bytes consumed
};

// Decodes one codepoint; malformed bytes decode as themselves (one byte).
inline DecodedChar utf8_decode(std::string_view s, size_t pos) {
  const auto b0 = static_cast<uint8_t>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](size_t i) -> bool {
    return pos + i < s.size() && (static_cast<uint8_t>(s[pos + i]) & 0xC0) == 0x80;
  };
  if ((b0 >> 5) == 0x6 && cont(1)) {
    return {static_cast<char32_t>(((b0 & 0x1Fu) << 6) |
                                  (static_cast<uint8_t>(s[pos + 1]) & 0x3Fu)),
            2};
  }
  if ((b0 >> 4) == 0xE && cont(1) && cont(2)) {
    return {static_cast<char32_t>(((b0 & 0x0Fu) << 12) |
                                  ((static_cast<uint8_t>(s[pos + 1]) & 0x3Fu) << 6) |
                                  (static_cast<uint8_t>(s[pos + 2]) & 0x3Fu)),
            3};
  }
  if ((b0 >> 3) == 0x1E && cont(1) && cont(2) && cont(3)) {
    return {static_cast<char32_t>(((b0 & 0x07u) << 18) |
                                  ((static_cast<uint8_t>(s[pos + 1]) & 0x3Fu) << 12) |
                                  ((static_cast<uint8_t>(s[pos + 2]) & 0x3Fu) << 6) |
                                  (static_cast<uint8_t>(s[pos + 3]) & 0x3Fu)),
            4};
  }
  return {b0, 1};
}

inline void utf8_append(std::string& out, char32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::u32string utf8_to_u32(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    auto [cp, n] = utf8_decode(s, i);
    out.push_back(cp);
    i += n;
  }
  return out;
}

inline std::string u32_to_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char32_t cp : s) utf8_append(out, cp);
  return out;
}

inline size_t codepoint_count(std::string_view s) {
  size_t n = 0;
  for (size_t i = 0; i < s.size(); i += utf8_decode(s, i).bytes) ++n;
  return n;
}

}  // namespace hebkit
