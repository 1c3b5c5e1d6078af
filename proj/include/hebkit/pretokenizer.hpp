#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hebkit/unicode.hpp"

namespace hebkit {

enum class PreTokenKind { Word, Punct, Number };

struct PreToken {
  std::string text;
  uint32_t begin = 0;  // byte offsets into the normalized text, [begin, end)
  uint32_t end = 0;
  PreTokenKind kind = PreTokenKind::Word;
};

struct NormalizedText {
  std::string text;
  // One entry per codepoint of `text`: its byte offset there and in the raw input.
  struct OffsetPair {
    uint32_t norm;
    uint32_t raw;
  };
  std::vector<OffsetPair> offsets;
};

struct PretokenizerOptions {
  // When set, a word-internal quotation mark is kept only before the final
  // letter of the word (the canonical abbreviation position) instead of
  // anywhere a Hebrew letter flanks it on both sides.
  bool strict_abbreviation = false;
};

namespace detail {

inline bool normalize_to_space(char32_t cp) {
  if (cp < 0x20 || (cp >= 0x7F && cp <= 0x9F)) return true;  // C0/C1 controls
  switch (cp) {  // zero-width and directional format characters
    case 0x200B: case 0x200C: case 0x200D: case 0x200E: case 0x200F:
    case 0x202A: case 0x202B: case 0x202C: case 0x202D: case 0x202E:
    case 0x2066: case 0x2067: case 0x2068: case 0x2069: case 0xFEFF:
      return true;
    default:
      return false;
  }
}

inline bool is_word_char(char32_t cp) {
  if (is_whitespace(cp) || is_ascii_digit(cp) || is_punct(cp)) return false;
  return true;  // letters of any script, marks, and symbols fall to the word bucket
}

}  // namespace detail

// Unifies quote variants (gershayim -> '"', geresh -> '\'') and maps control
// and zero-width characters to plain spaces. Hebrew holds no canonical
// compositions, so composed input passes through unchanged.
inline NormalizedText normalize(std::string_view raw) {
  NormalizedText out;
  out.text.reserve(raw.size());
  out.offsets.reserve(raw.size());
  for (size_t i = 0; i < raw.size();) {
    auto [cp, n] = utf8_decode(raw, i);
    char32_t mapped = cp;
    if (cp == kGershayim) {
      mapped = U'"';
    } else if (cp == kGeresh) {
      mapped = U'\'';
    } else if (detail::normalize_to_space(cp)) {
      mapped = U' ';
    }
    out.offsets.push_back({static_cast<uint32_t>(out.text.size()), static_cast<uint32_t>(i)});
    utf8_append(out.text, mapped);
    i += n;
  }
  return out;
}

// Splits normalized text into Word / Punct / Number pre-tokens. Punctuation
// becomes single-character tokens except the two Hebrew retention rules:
// a quotation mark flanked by Hebrew letters stays inside its word
// (abbreviations), and an apostrophe directly after a Hebrew letter stays
// attached (foreign sounds, single-letter abbreviations).
inline std::vector<PreToken> pretokenize(const NormalizedText& norm,
                                         const PretokenizerOptions& opts = {}) {
  std::vector<PreToken> out;
  std::string_view text = norm.text;

  std::vector<char32_t> cps;
  std::vector<uint32_t> starts;  // byte offset of each codepoint, plus end sentinel
  cps.reserve(text.size());
  for (size_t i = 0; i < text.size();) {
    auto [cp, n] = utf8_decode(text, i);
    cps.push_back(cp);
    starts.push_back(static_cast<uint32_t>(i));
    i += n;
  }
  starts.push_back(static_cast<uint32_t>(text.size()));
  const size_t n = cps.size();

  auto emit = [&](size_t from, size_t to, PreTokenKind kind) {
    PreToken tok;
    tok.begin = starts[from];
    tok.end = starts[to];
    tok.text.assign(text.substr(tok.begin, tok.end - tok.begin));
    tok.kind = kind;
    out.push_back(std::move(tok));
  };

  size_t i = 0;
  while (i < n) {
    const char32_t cp = cps[i];
    if (is_whitespace(cp)) {
      ++i;
      continue;
    }
    if (is_ascii_digit(cp)) {
      size_t j = i + 1;
      while (j < n) {
        if (is_ascii_digit(cps[j])) {
          ++j;
        } else if ((cps[j] == U'.' || cps[j] == U',') && j + 1 < n &&
                   is_ascii_digit(cps[j + 1]) && is_ascii_digit(cps[j - 1])) {
          j += 2;  // decimal point or grouping comma inside a digit run
        } else {
          break;
        }
      }
      emit(i, j, PreTokenKind::Number);
      i = j;
      continue;
    }
    if (detail::is_word_char(cp)) {
      size_t j = i + 1;
      while (j < n) {
        const char32_t c = cps[j];
        if (detail::is_word_char(c)) {
          ++j;
          continue;
        }
        if (c == U'"' && is_hebrew_letter(cps[j - 1]) && j + 1 < n &&
            is_hebrew_letter(cps[j + 1])) {
          if (opts.strict_abbreviation &&
              j + 2 < n && detail::is_word_char(cps[j + 2])) {
            break;  // more than one letter would follow the mark
          }
          j += 2;
          continue;
        }
        if (c == U'\'' && is_hebrew_letter(cps[j - 1])) {
          ++j;
          continue;
        }
        break;
      }
      emit(i, j, PreTokenKind::Word);
      i = j;
      continue;
    }
    emit(i, i + 1, PreTokenKind::Punct);  // punctuation splits one char at a time
    ++i;
  }
  return out;
}

inline std::vector<PreToken> pretokenize(std::string_view raw,
                                         const PretokenizerOptions& opts = {}) {
  return pretokenize(normalize(raw), opts);
}

}  // namespace hebkit
