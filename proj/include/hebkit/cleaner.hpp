#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hebkit/unicode.hpp"

namespace hebkit {

struct Document {
  std::string id;
  std::string text;
  std::string source;
};

struct FilterConfig {
  size_t min_words = 50;
  double max_foreign_char_ratio = 0.10;
  size_t max_repeat_run = 20;
  double entropy_low = 2.0;   // bits per non-whitespace character
  double entropy_high = 6.0;
  double min_letter_ratio = 0.25;
  double scorer_min_score = -8.0;  // drop below this when a scorer is attached
  bool enable_min_words = true;
  bool enable_script_ratio = true;
  bool enable_gibberish = true;
  bool enable_scorer = true;
};

struct CleanerConfig {
  FilterConfig base;
  std::map<std::string, FilterConfig> per_source;  // overrides keyed by Document::source

  const FilterConfig& for_source(const std::string& source) const {
    auto it = per_source.find(source);
    return it == per_source.end() ? base : it->second;
  }
};

struct StageCounter {
  uint64_t examined = 0;
  uint64_t dropped = 0;

  StageCounter& operator+=(const StageCounter& o) {
    examined += o.examined;
    dropped += o.dropped;
    return *this;
  }
};

struct CleanReport {
  StageCounter min_words;
  StageCounter script_ratio;
  StageCounter gibberish;
  StageCounter scorer;
  uint64_t scorer_errors = 0;
  uint64_t kept = 0;
  std::vector<std::pair<std::string, std::string>> drop_samples;  // (doc id, reason)

  CleanReport& operator+=(const CleanReport& o) {
    min_words += o.min_words;
    script_ratio += o.script_ratio;
    gibberish += o.gibberish;
    scorer += o.scorer;
    scorer_errors += o.scorer_errors;
    kept += o.kept;
    drop_samples.insert(drop_samples.end(), o.drop_samples.begin(), o.drop_samples.end());
    return *this;
  }
};

/** Optional stand-in for a model-based document quality score; higher is better. */
using DocumentScorer = std::function<double(const Document&)>;

namespace detail {

inline bool is_pure_punct(std::string_view token) {
  size_t i = 0;
  bool any = false;
  while (i < token.size()) {
    const auto d = utf8_decode(token, i);
    if (!is_punct(d.cp)) return false;
    any = true;
    i += d.bytes;
  }
  return any;
}

}  // namespace detail

/** Whitespace tokens that are not pure punctuation. */
inline size_t count_words(std::string_view text) {
  size_t words = 0;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size()) {
      const auto d = utf8_decode(text, i);
      if (!is_whitespace(d.cp)) break;
      i += d.bytes;
    }
    const size_t begin = i;
    while (i < text.size()) {
      const auto d = utf8_decode(text, i);
      if (is_whitespace(d.cp)) break;
      i += d.bytes;
    }
    if (i > begin && !detail::is_pure_punct(text.substr(begin, i - begin))) ++words;
  }
  return words;
}

inline bool filter_min_words(const Document& doc, size_t min_words) {
  return count_words(doc.text) >= min_words;
}

/** Fraction of letters outside the Hebrew and Latin ranges; 1.0 when letterless. */
inline double script_ratio(const Document& doc) {
  uint64_t letters = 0;
  uint64_t foreign = 0;
  size_t i = 0;
  while (i < doc.text.size()) {
    const auto d = utf8_decode(doc.text, i);
    i += d.bytes;
    if (!is_letter(d.cp)) continue;
    ++letters;
    if (!is_hebrew_or_latin_letter(d.cp)) ++foreign;
  }
  if (letters == 0) return 1.0;
  return static_cast<double>(foreign) / static_cast<double>(letters);
}

struct GibberishResult {
  double score = 0.0;  // max of the normalized sub-scores, in [0,1]
  bool drop = false;
  size_t longest_run = 0;
  double entropy = 0.0;
  double letter_ratio = 0.0;
};

/**
 * Three independent checks over non-whitespace characters: longest identical-
 * character run, Shannon entropy of the character histogram, and the fraction
 * of characters that are letters. Any tripped check drops the document.
 */
inline GibberishResult gibberish_score(const Document& doc, const FilterConfig& cfg) {
  GibberishResult r;
  std::unordered_map<char32_t, uint64_t> histogram;
  uint64_t total = 0;
  uint64_t letters = 0;
  char32_t prev = 0;
  size_t run = 0;
  size_t i = 0;
  while (i < doc.text.size()) {
    const auto d = utf8_decode(doc.text, i);
    i += d.bytes;
    if (is_whitespace(d.cp)) {
      prev = 0;
      run = 0;
      continue;
    }
    ++total;
    ++histogram[d.cp];
    if (is_letter(d.cp)) ++letters;
    run = d.cp == prev ? run + 1 : 1;
    prev = d.cp;
    r.longest_run = std::max(r.longest_run, run);
  }

  for (const auto& [cp, n] : histogram) {
    const double p = static_cast<double>(n) / static_cast<double>(total);
    r.entropy -= p * std::log2(p);
  }
  r.letter_ratio = total == 0 ? 0.0
                              : static_cast<double>(letters) / static_cast<double>(total);

  const double run_sub =
      cfg.max_repeat_run == 0
          ? 1.0
          : std::min(1.0, static_cast<double>(r.longest_run) /
                              static_cast<double>(cfg.max_repeat_run));
  double entropy_sub = 0.0;
  if (r.entropy < cfg.entropy_low && cfg.entropy_low > 0) {
    entropy_sub = std::min(1.0, (cfg.entropy_low - r.entropy) / cfg.entropy_low);
  } else if (r.entropy > cfg.entropy_high && cfg.entropy_high > 0) {
    entropy_sub = std::min(1.0, (r.entropy - cfg.entropy_high) / cfg.entropy_high);
  }
  double letter_sub = 0.0;
  if (r.letter_ratio < cfg.min_letter_ratio && cfg.min_letter_ratio > 0) {
    letter_sub = (cfg.min_letter_ratio - r.letter_ratio) / cfg.min_letter_ratio;
  }
  r.score = std::max({run_sub, entropy_sub, letter_sub});
  r.drop = r.longest_run > cfg.max_repeat_run ||
           r.entropy < cfg.entropy_low || r.entropy > cfg.entropy_high ||
           r.letter_ratio < cfg.min_letter_ratio;
  return r;
}

/**
 * Applies the filters in fixed order (min_words, script_ratio, gibberish,
 * scorer); a drop is charged to the first failing stage. A throwing scorer
 * keeps the document (fail-open) and bumps scorer_errors.
 */
inline std::vector<Document> clean_corpus(const std::vector<Document>& docs,
                                          const CleanerConfig& config,
                                          CleanReport* report = nullptr,
                                          const DocumentScorer& scorer = nullptr,
                                          size_t max_drop_samples = 0) {
  std::vector<Document> kept;
  CleanReport local;
  CleanReport& rep = report ? *report : local;
  auto record_drop = [&](const Document& doc, const char* reason) {
    if (rep.drop_samples.size() < max_drop_samples) {
      rep.drop_samples.emplace_back(doc.id, reason);
    }
  };

  for (const auto& doc : docs) {
    const FilterConfig& cfg = config.for_source(doc.source);

    if (cfg.enable_min_words) {
      ++rep.min_words.examined;
      if (!filter_min_words(doc, cfg.min_words)) {
        ++rep.min_words.dropped;
        record_drop(doc, "min_words");
        continue;
      }
    }
    if (cfg.enable_script_ratio) {
      ++rep.script_ratio.examined;
      if (script_ratio(doc) > cfg.max_foreign_char_ratio) {
        ++rep.script_ratio.dropped;
        record_drop(doc, "script_ratio");
        continue;
      }
    }
    if (cfg.enable_gibberish) {
      ++rep.gibberish.examined;
      if (gibberish_score(doc, cfg).drop) {
        ++rep.gibberish.dropped;
        record_drop(doc, "gibberish");
        continue;
      }
    }
    if (cfg.enable_scorer && scorer) {
      ++rep.scorer.examined;
      bool drop = false;
      try {
        drop = scorer(doc) < cfg.scorer_min_score;
      } catch (const std::exception&) {
        ++rep.scorer_errors;
      }
      if (drop) {
        ++rep.scorer.dropped;
        record_drop(doc, "scorer");
        continue;
      }
    }
    ++rep.kept;
    kept.push_back(doc);
  }
  return kept;
}

/**
 * Character-trigram log-likelihood scorer, a self-contained stand-in for the
 * model-perplexity filter. Returns mean log2 probability per character under
 * an add-alpha smoothed trigram model fit on reference text.
 */
class TrigramScorer {
 public:
  explicit TrigramScorer(double alpha = 0.01) : alpha_(alpha) {}

  void fit(std::string_view text) {
    const std::u32string cps = contextify(text);
    for (size_t i = 2; i < cps.size(); ++i) {
      alphabet_.insert(cps[i]);
      ++trigram_[key(cps[i - 2], cps[i - 1], cps[i])];
      ++bigram_[key(cps[i - 2], cps[i - 1], 0)];
    }
  }

  double operator()(const Document& doc) const { return score(doc.text); }

  double score(std::string_view text) const {
    const std::u32string cps = contextify(text);
    if (cps.size() <= 2 || alphabet_.empty()) return 0.0;
    const double v = static_cast<double>(alphabet_.size()) + 1.0;
    double total = 0.0;
    size_t n = 0;
    for (size_t i = 2; i < cps.size(); ++i) {
      const double num = lookup(trigram_, key(cps[i - 2], cps[i - 1], cps[i])) + alpha_;
      const double den = lookup(bigram_, key(cps[i - 2], cps[i - 1], 0)) + alpha_ * v;
      total += std::log2(num / den);
      ++n;
    }
    return total / static_cast<double>(n);
  }

 private:
  static std::u32string contextify(std::string_view text) {
    std::u32string cps = U"\x02\x02";  // leading boundary context
    size_t i = 0;
    while (i < text.size()) {
      const auto d = utf8_decode(text, i);
      cps.push_back(is_whitespace(d.cp) ? U' ' : d.cp);
      i += d.bytes;
    }
    return cps;
  }

  static uint64_t key(char32_t a, char32_t b, char32_t c) {
    uint64_t h = 1469598103934665603ull;
    for (char32_t x : {a, b, c}) {
      h ^= static_cast<uint64_t>(x);
      h *= 1099511628211ull;
    }
    return h;
  }

  static double lookup(const std::unordered_map<uint64_t, uint64_t>& m, uint64_t k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : static_cast<double>(it->second);
  }

  double alpha_;
  std::unordered_map<uint64_t, uint64_t> trigram_;
  std::unordered_map<uint64_t, uint64_t> bigram_;
  std::set<char32_t> alphabet_;
};

}  // namespace hebkit
