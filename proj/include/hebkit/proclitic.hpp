#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hebkit/tokenize.hpp"
#include "hebkit/unicode.hpp"

namespace hebkit {

/** Indices into the standard grammar's rule table. */
enum ProcliticFunction : size_t {
  kCconjVav = 0,  // ו
  kSconjShe = 1,  // ש
  kSconjKshe = 2, // כש
  kAdpBe = 3,     // ב
  kAdpKe = 4,     // כ
  kAdpLe = 5,     // ל
  kAdpMin = 6,    // מ
  kDetHe = 7,     // ה, covert after ב/כ/ל
};

/** One per-function sigmoid probability, indexed like the grammar rules. */
using FunctionProbabilities = std::vector<double>;

struct ProcliticRule {
  std::string name;
  std::string tag;                   // CCONJ / SCONJ / ADP / DET
  std::u32string surface;
  int slot = 0;                      // rules fire in ascending slot order
  std::vector<size_t> covert_after;  // surface omitted right after these rules
};

/**
 * Ordered-slot prefix grammar. Each slot contributes at most one function;
 * a function's surface must match the word at the current offset, except
 * when the immediately preceding function licenses a covert form.
 */
class ProcliticGrammar {
 public:
  static ProcliticGrammar standard() {
    ProcliticGrammar g;
    g.add("CCONJ_VAV", "CCONJ", U"\x05D5", 1);
    g.add("SCONJ_SHE", "SCONJ", U"\x05E9", 2);
    g.add("SCONJ_KSHE", "SCONJ", U"\x05DB\x05E9", 2);
    g.add("ADP_BE", "ADP", U"\x05D1", 3);
    g.add("ADP_KE", "ADP", U"\x05DB", 3);
    g.add("ADP_LE", "ADP", U"\x05DC", 3);
    g.add("ADP_MIN", "ADP", U"\x05DE", 3);
    g.add("DET_HE", "DET", U"\x05D4", 4, {"ADP_BE", "ADP_KE", "ADP_LE"});
    return g;
  }

  static ProcliticGrammar from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("functions") || !j["functions"].is_array()) {
      throw std::invalid_argument("grammar: expected object with a functions array");
    }
    ProcliticGrammar g;
    std::vector<std::vector<std::string>> pending_covert;
    for (const auto& f : j["functions"]) {
      for (const auto& [key, value] : f.items()) {
        if (key != "name" && key != "tag" && key != "surface" && key != "slot" &&
            key != "covert_after") {
          throw std::invalid_argument("grammar: unknown key '" + key + "'");
        }
      }
      std::vector<std::string> covert;
      if (f.contains("covert_after")) {
        covert = f["covert_after"].get<std::vector<std::string>>();
      }
      g.add(f.at("name").get<std::string>(), f.at("tag").get<std::string>(),
            utf8_to_u32(f.at("surface").get<std::string>()),
            f.at("slot").get<int>(), covert);
    }
    return g;
  }

  static ProcliticGrammar load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grammar file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

  size_t size() const { return rules_.size(); }
  const ProcliticRule& rule(size_t i) const { return rules_.at(i); }
  const std::vector<ProcliticRule>& rules() const { return rules_; }

  size_t id_of(std::string_view name) const {
    for (size_t i = 0; i < rules_.size(); ++i) {
      if (rules_[i].name == name) return i;
    }
    throw std::invalid_argument("grammar: unknown function '" + std::string(name) + "'");
  }

 private:
  void add(std::string name, std::string tag, std::u32string surface, int slot,
           const std::vector<std::string>& covert_names = {}) {
    if (name.empty() || surface.empty() || slot <= 0) {
      throw std::invalid_argument("grammar: function needs a name, surface, and positive slot");
    }
    for (const auto& r : rules_) {
      if (r.name == name) throw std::invalid_argument("grammar: duplicate function '" + name + "'");
    }
    ProcliticRule r;
    r.name = std::move(name);
    r.tag = std::move(tag);
    r.surface = std::move(surface);
    r.slot = slot;
    for (const auto& n : covert_names) r.covert_after.push_back(id_of(n));
    rules_.push_back(std::move(r));
  }

  std::vector<ProcliticRule> rules_;
};

struct FunctionSet {
  std::vector<size_t> functions;  // rule ids in slot order
  size_t consumed = 0;            // codepoints of the word covered by surfaces
};

struct SegmentationResult {
  std::vector<size_t> functions;
  size_t consumed = 0;
  std::vector<std::pair<std::string, size_t>> prefix_segments;  // (surface, rule id)
  std::string base;
  double score = 0.0;
};

namespace detail {

inline bool covert_here(const ProcliticRule& r, size_t prev, bool has_prev) {
  return has_prev &&
         std::find(r.covert_after.begin(), r.covert_after.end(), prev) !=
             r.covert_after.end();
}

inline void enumerate_sets(const std::u32string& word, const ProcliticGrammar& grammar,
                           const std::vector<std::vector<size_t>>& slots, size_t slot_idx,
                           std::vector<size_t>& current, size_t pos, bool has_prev,
                           size_t prev, std::vector<FunctionSet>& out) {
  if (slot_idx == slots.size()) {
    if (pos < word.size()) out.push_back({current, pos});
    return;
  }
  enumerate_sets(word, grammar, slots, slot_idx + 1, current, pos, has_prev, prev, out);
  for (size_t id : slots[slot_idx]) {
    const ProcliticRule& r = grammar.rule(id);
    size_t next_pos = pos;
    if (!covert_here(r, prev, has_prev)) {
      if (word.compare(pos, r.surface.size(), r.surface) != 0) continue;
      next_pos = pos + r.surface.size();
    }
    current.push_back(id);
    enumerate_sets(word, grammar, slots, slot_idx + 1, current, next_pos, true, id, out);
    current.pop_back();
  }
}

inline std::vector<std::vector<size_t>> slot_groups(const ProcliticGrammar& grammar) {
  std::map<int, std::vector<size_t>> by_slot;
  for (size_t i = 0; i < grammar.size(); ++i) {
    by_slot[grammar.rule(i).slot].push_back(i);
  }
  std::vector<std::vector<size_t>> slots;
  for (auto& [slot, ids] : by_slot) slots.push_back(std::move(ids));
  return slots;
}

}  // namespace detail

/**
 * All grammar-accepted function sequences whose surfaces prefix the word and
 * leave a non-empty base. The empty set is always present. Words that do not
 * begin with a Hebrew letter take no prefixes.
 */
inline std::vector<FunctionSet> valid_function_sets(const std::u32string& word,
                                                    const ProcliticGrammar& grammar) {
  if (word.empty()) throw std::invalid_argument("empty word");
  if (!is_hebrew_letter(word[0])) return {FunctionSet{}};
  std::vector<FunctionSet> out;
  std::vector<size_t> current;
  detail::enumerate_sets(word, grammar, detail::slot_groups(grammar), 0, current, 0,
                         false, 0, out);
  std::sort(out.begin(), out.end(), [](const FunctionSet& a, const FunctionSet& b) {
    if (a.functions.size() != b.functions.size()) {
      return a.functions.size() < b.functions.size();
    }
    return a.functions < b.functions;
  });
  return out;
}

inline std::vector<FunctionSet> valid_function_sets(std::string_view word,
                                                    const ProcliticGrammar& grammar) {
  return valid_function_sets(utf8_to_u32(word), grammar);
}

/**
 * Picks the valid set maximizing sum of log p over chosen functions plus
 * log(1-p) over the rest; probabilities are clamped to [1e-7, 1-1e-7].
 * Ties go to the smaller set, then to rule-id order.
 */
inline SegmentationResult decode(std::string_view word, const FunctionProbabilities& probs,
                                 const ProcliticGrammar& grammar) {
  if (probs.size() != grammar.size()) {
    throw std::invalid_argument("probability count does not match grammar");
  }
  constexpr double kEps = 1e-7;
  std::vector<double> log_p(probs.size()), log_q(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) {
      throw std::invalid_argument("probability out of range");
    }
    const double p = std::min(1.0 - kEps, std::max(kEps, probs[i]));
    log_p[i] = std::log(p);
    log_q[i] = std::log1p(-p);
  }
  double base_score = 0.0;
  for (double q : log_q) base_score += q;

  const std::u32string u32 = utf8_to_u32(word);
  const std::vector<FunctionSet> sets = valid_function_sets(u32, grammar);
  const FunctionSet* best = nullptr;
  double best_score = 0.0;
  for (const auto& s : sets) {
    double score = base_score;
    for (size_t f : s.functions) score += log_p[f] - log_q[f];
    if (!best || score > best_score) {
      best = &s;
      best_score = score;
    }
  }

  SegmentationResult r;
  r.functions = best->functions;
  r.consumed = best->consumed;
  r.score = best_score;
  size_t pos = 0;
  bool has_prev = false;
  size_t prev = 0;
  for (size_t f : r.functions) {
    const ProcliticRule& rule = grammar.rule(f);
    std::u32string surface;
    if (!detail::covert_here(rule, prev, has_prev)) {
      surface = u32.substr(pos, rule.surface.size());
      pos += rule.surface.size();
    }
    r.prefix_segments.emplace_back(u32_to_utf8(surface), f);
    has_prev = true;
    prev = f;
  }
  r.base = u32_to_utf8(u32.substr(r.consumed));
  return r;
}

/**
 * Position in the tokenization whose per-function probabilities feed
 * decode(): the first piece of the word's first occurrence.
 */
inline size_t first_piece_gate(std::string_view word, const TokenizedText& tok) {
  for (size_t w = 0; w < tok.words.size(); ++w) {
    if (tok.words[w].text != word) continue;
    for (size_t p = 0; p < tok.ids.size(); ++p) {
      if (tok.word_index[p] == static_cast<int32_t>(w) && tok.first_piece[p]) return p;
    }
  }
  throw std::invalid_argument("word not present in tokenization");
}

}  // namespace hebkit
