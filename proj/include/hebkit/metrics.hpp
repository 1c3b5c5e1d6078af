#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hebkit/unicode.hpp"

namespace hebkit {

/** (form, label) pairs of one sentence, multiset semantics. */
using LabeledMorphemes = std::vector<std::pair<std::string, std::string>>;

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

namespace detail {

inline double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

inline uint64_t multiset_overlap(const LabeledMorphemes& gold, const LabeledMorphemes& pred) {
  std::map<std::pair<std::string, std::string>, uint64_t> counts;
  for (const auto& g : gold) ++counts[g];
  uint64_t overlap = 0;
  for (const auto& p : pred) {
    auto it = counts.find(p);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return overlap;
}

}  // namespace detail

/**
 * Morpheme-multiset comparison. Micro scores pool the per-sentence overlap,
 * prediction, and gold counts; macro averages per-sentence F1. Sentences
 * where both sides are empty contribute nothing either way.
 */
class MsetAccumulator {
 public:
  void add(const LabeledMorphemes& gold, const LabeledMorphemes& pred) {
    if (gold.empty() && pred.empty()) return;
    const uint64_t inter = detail::multiset_overlap(gold, pred);
    overlap_ += inter;
    gold_ += gold.size();
    pred_ += pred.size();
    const double p = detail::safe_div(static_cast<double>(inter),
                                      static_cast<double>(pred.size()));
    const double r = detail::safe_div(static_cast<double>(inter),
                                      static_cast<double>(gold.size()));
    macro_f1_sum_ += detail::f1_of(p, r);
    ++sentences_;
  }

  MsetAccumulator& operator+=(const MsetAccumulator& o) {
    overlap_ += o.overlap_;
    gold_ += o.gold_;
    pred_ += o.pred_;
    macro_f1_sum_ += o.macro_f1_sum_;
    sentences_ += o.sentences_;
    return *this;
  }

  PrfScore micro() const {
    PrfScore s;
    s.precision = detail::safe_div(static_cast<double>(overlap_), static_cast<double>(pred_));
    s.recall = detail::safe_div(static_cast<double>(overlap_), static_cast<double>(gold_));
    s.f1 = detail::f1_of(s.precision, s.recall);
    return s;
  }

  double macro_f1() const {
    return detail::safe_div(macro_f1_sum_, static_cast<double>(sentences_));
  }

 private:
  uint64_t overlap_ = 0;
  uint64_t gold_ = 0;
  uint64_t pred_ = 0;
  double macro_f1_sum_ = 0.0;
  uint64_t sentences_ = 0;
};

inline PrfScore mset_f1(const std::vector<LabeledMorphemes>& gold,
                        const std::vector<LabeledMorphemes>& pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold and prediction sentence counts differ");
  }
  MsetAccumulator acc;
  for (size_t i = 0; i < gold.size(); ++i) acc.add(gold[i], pred[i]);
  return acc.micro();
}

/** Token-level F1 over non-"O" labels. */
class TokenF1Accumulator {
 public:
  void add(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
    if (gold.size() != pred.size()) {
      throw std::invalid_argument("gold and prediction label counts differ");
    }
    for (size_t i = 0; i < gold.size(); ++i) {
      const bool gold_o = gold[i] == "O";
      const bool pred_o = pred[i] == "O";
      if (!pred_o && gold[i] == pred[i]) {
        ++tp_;
      } else {
        if (!pred_o) ++fp_;
        if (!gold_o) ++fn_;
      }
    }
  }

  TokenF1Accumulator& operator+=(const TokenF1Accumulator& o) {
    tp_ += o.tp_;
    fp_ += o.fp_;
    fn_ += o.fn_;
    return *this;
  }

  PrfScore score() const {
    PrfScore s;
    s.precision = detail::safe_div(static_cast<double>(tp_), static_cast<double>(tp_ + fp_));
    s.recall = detail::safe_div(static_cast<double>(tp_), static_cast<double>(tp_ + fn_));
    s.f1 = detail::f1_of(s.precision, s.recall);
    return s;
  }

 private:
  uint64_t tp_ = 0;
  uint64_t fp_ = 0;
  uint64_t fn_ = 0;
};

inline double token_f1(const std::vector<std::vector<std::string>>& gold,
                       const std::vector<std::vector<std::string>>& pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold and prediction sentence counts differ");
  }
  TokenF1Accumulator acc;
  for (size_t i = 0; i < gold.size(); ++i) acc.add(gold[i], pred[i]);
  return acc.score().f1;
}

struct QaItem {
  std::string pred;
  std::vector<std::string> gold;
};

struct QaOptions {
  bool remove_articles = false;  // off for Hebrew; flips on the English recipe
};

/** Strip punctuation, collapse whitespace, optionally drop English articles. */
inline std::string normalize_answer(std::string_view text, const QaOptions& opts = {}) {
  std::string cleaned;
  size_t i = 0;
  while (i < text.size()) {
    const auto d = utf8_decode(text, i);
    i += d.bytes;
    if (is_punct(d.cp)) continue;
    if (is_whitespace(d.cp)) {
      cleaned.push_back(' ');
    } else {
      utf8_append(cleaned, d.cp);
    }
  }
  std::vector<std::string> tokens;
  size_t start = 0;
  while (start < cleaned.size()) {
    while (start < cleaned.size() && cleaned[start] == ' ') ++start;
    size_t end = start;
    while (end < cleaned.size() && cleaned[end] != ' ') ++end;
    if (end > start) tokens.push_back(cleaned.substr(start, end - start));
    start = end;
  }
  if (opts.remove_articles) {
    auto is_article = [](const std::string& t) {
      std::string lower;
      for (char c : t) lower.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
      return lower == "a" || lower == "an" || lower == "the";
    };
    tokens.erase(std::remove_if(tokens.begin(), tokens.end(), is_article), tokens.end());
  }
  std::string out;
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (t > 0) out.push_back(' ');
    out += tokens[t];
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> tokens;
  size_t start = 0;
  while (start < s.size()) {
    while (start < s.size() && s[start] == ' ') ++start;
    size_t end = start;
    while (end < s.size() && s[end] != ' ') ++end;
    if (end > start) tokens.push_back(s.substr(start, end - start));
    start = end;
  }
  return tokens;
}

inline double bag_f1(const std::vector<std::string>& gold,
                     const std::vector<std::string>& pred) {
  if (gold.empty() || pred.empty()) return gold == pred ? 1.0 : 0.0;
  std::map<std::string, uint64_t> counts;
  for (const auto& g : gold) ++counts[g];
  uint64_t overlap = 0;
  for (const auto& p : pred) {
    auto it = counts.find(p);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  const double prec = static_cast<double>(overlap) / static_cast<double>(pred.size());
  const double rec = static_cast<double>(overlap) / static_cast<double>(gold.size());
  return f1_of(prec, rec);
}

}  // namespace detail

struct QaScore {
  double em = 0.0;  // percentages
  double f1 = 0.0;
};

class QaAccumulator {
 public:
  explicit QaAccumulator(QaOptions opts = {}) : opts_(opts) {}

  void add(const QaItem& item) {
    if (item.gold.empty()) throw std::invalid_argument("QA item with empty gold list");
    const std::string pred = normalize_answer(item.pred, opts_);
    const auto pred_tokens = detail::split_tokens(pred);
    double best_em = 0.0;
    double best_f1 = 0.0;
    for (const auto& g : item.gold) {
      const std::string gold = normalize_answer(g, opts_);
      best_em = std::max(best_em, gold == pred ? 1.0 : 0.0);
      best_f1 = std::max(best_f1, detail::bag_f1(detail::split_tokens(gold), pred_tokens));
    }
    em_sum_ += best_em;
    f1_sum_ += best_f1;
    ++n_;
  }

  QaAccumulator& operator+=(const QaAccumulator& o) {
    em_sum_ += o.em_sum_;
    f1_sum_ += o.f1_sum_;
    n_ += o.n_;
    return *this;
  }

  QaScore score() const {
    QaScore s;
    s.em = detail::safe_div(em_sum_, static_cast<double>(n_)) * 100.0;
    s.f1 = detail::safe_div(f1_sum_, static_cast<double>(n_)) * 100.0;
    return s;
  }

 private:
  QaOptions opts_;
  double em_sum_ = 0.0;
  double f1_sum_ = 0.0;
  uint64_t n_ = 0;
};

inline QaScore qa_em_f1(const std::vector<QaItem>& items, QaOptions opts = {}) {
  if (items.empty()) throw std::invalid_argument("QA item list must not be empty");
  QaAccumulator acc(opts);
  for (const auto& item : items) acc.add(item);
  return acc.score();
}

class AccuracyAccumulator {
 public:
  void add(std::string_view gold, std::string_view pred) {
    if (gold == pred) ++correct_;
    ++total_;
  }

  AccuracyAccumulator& operator+=(const AccuracyAccumulator& o) {
    correct_ += o.correct_;
    total_ += o.total_;
    return *this;
  }

  double score() const {
    return detail::safe_div(static_cast<double>(correct_), static_cast<double>(total_));
  }

 private:
  uint64_t correct_ = 0;
  uint64_t total_ = 0;
};

inline double accuracy(const std::vector<std::string>& gold,
                       const std::vector<std::string>& pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold and prediction label counts differ");
  }
  AccuracyAccumulator acc;
  for (size_t i = 0; i < gold.size(); ++i) acc.add(gold[i], pred[i]);
  return acc.score();
}

}  // namespace hebkit
