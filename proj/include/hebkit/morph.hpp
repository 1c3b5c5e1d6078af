#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hebkit/proclitic.hpp"
#include "hebkit/tokenize.hpp"

namespace hebkit {

enum class PosTag : uint8_t {
  kAdj, kAdp, kAdv, kAux, kCconj, kDet, kIntj, kNoun, kNum, kPart, kPron,
  kPropn, kPunct, kSconj, kSym, kVerb, kX,
};

inline constexpr std::array<std::string_view, 17> kPosNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

enum class Gender : uint8_t { kMasc, kFem, kMascFem, kNa };
enum class Number : uint8_t { kSing, kPlur, kDual, kNa };
enum class Person : uint8_t { kFirst, kSecond, kThird, kNa };
enum class Tense : uint8_t { kPast, kPresent, kFuture, kImperative, kNa };

inline constexpr std::array<std::string_view, 4> kGenderNames = {"Masc", "Fem", "MascFem", "NA"};
inline constexpr std::array<std::string_view, 4> kNumberNames = {"Sing", "Plur", "Dual", "NA"};
inline constexpr std::array<std::string_view, 4> kPersonNames = {"1", "2", "3", "NA"};
inline constexpr std::array<std::string_view, 5> kTenseNames = {"Past", "Present", "Future",
                                                                "Imperative", "NA"};

struct MorphFeatures {
  Gender gender = Gender::kNa;
  Number number = Number::kNa;
  Person person = Person::kNa;
  Tense tense = Tense::kNa;

  bool operator==(const MorphFeatures&) const = default;
};

/** Pronominal suffix labels; index 0 means "no suffix". */
inline std::vector<std::string> default_suffix_functions() {
  return {"None", "Possessive", "Objective", "PronominalNominal"};
}

struct SuffixAnalysis {
  bool present = false;
  size_t function = 0;  // index into the suffix label list
  MorphFeatures features;

  bool operator==(const SuffixAnalysis&) const = default;
};

struct WordAnalysis {
  std::string word;
  PosTag pos = PosTag::kX;
  MorphFeatures features;
  SegmentationResult proclitics;
  SuffixAnalysis suffix;
};

using SentenceAnalysis = std::vector<WordAnalysis>;

/**
 * Raw classifier outputs for one word. POS, the four feature slots, and the
 * suffix heads are argmax scores; proclitic entries are per-function sigmoid
 * probabilities.
 */
struct LogitBundle {
  std::vector<double> pos;              // 17, PosTag order
  std::vector<double> proclitic;        // one per grammar function
  std::vector<double> gender;           // 4
  std::vector<double> number;           // 4
  std::vector<double> person;           // 4
  std::vector<double> tense;            // 5
  std::vector<double> suffix_function;  // suffix label count, index 0 = None
  std::vector<double> suffix_gender;    // 4
  std::vector<double> suffix_number;    // 4
  std::vector<double> suffix_person;    // 4
};

namespace detail {

inline size_t argmax_checked(const std::vector<double>& scores, size_t expected,
                             const char* slot) {
  if (scores.size() != expected) {
    throw std::invalid_argument(std::string("score count mismatch for ") + slot);
  }
  size_t best = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw std::invalid_argument("invalid score");
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace detail

/**
 * Fuses the five classifier heads into one analysis. The suffix-feature head
 * is gated: when the suffix classifier picks "None", the suffix features are
 * forced to NA without consulting their scores (beyond finiteness checks).
 */
inline WordAnalysis decode_word(std::string_view word, const LogitBundle& bundle,
                                const ProcliticGrammar& grammar,
                                const std::vector<std::string>& suffix_functions =
                                    default_suffix_functions()) {
  if (word.empty()) throw std::invalid_argument("empty word");
  if (suffix_functions.empty()) {
    throw std::invalid_argument("suffix function list must not be empty");
  }
  for (double p : bundle.proclitic) {
    if (!std::isfinite(p)) throw std::invalid_argument("invalid score");
  }

  WordAnalysis a;
  a.word = std::string(word);
  a.pos = static_cast<PosTag>(detail::argmax_checked(bundle.pos, kPosNames.size(), "pos"));
  a.features.gender = static_cast<Gender>(
      detail::argmax_checked(bundle.gender, kGenderNames.size(), "gender"));
  a.features.number = static_cast<Number>(
      detail::argmax_checked(bundle.number, kNumberNames.size(), "number"));
  a.features.person = static_cast<Person>(
      detail::argmax_checked(bundle.person, kPersonNames.size(), "person"));
  a.features.tense = static_cast<Tense>(
      detail::argmax_checked(bundle.tense, kTenseNames.size(), "tense"));
  a.proclitics = decode(word, bundle.proclitic, grammar);

  a.suffix.function = detail::argmax_checked(bundle.suffix_function,
                                             suffix_functions.size(), "suffix_function");
  const size_t sg = detail::argmax_checked(bundle.suffix_gender, kGenderNames.size(),
                                           "suffix_gender");
  const size_t sn = detail::argmax_checked(bundle.suffix_number, kNumberNames.size(),
                                           "suffix_number");
  const size_t sp = detail::argmax_checked(bundle.suffix_person, kPersonNames.size(),
                                           "suffix_person");
  a.suffix.present = a.suffix.function != 0;
  if (a.suffix.present) {
    a.suffix.features.gender = static_cast<Gender>(sg);
    a.suffix.features.number = static_cast<Number>(sn);
    a.suffix.features.person = static_cast<Person>(sp);
  }
  return a;
}

/** One bundle per word. */
inline SentenceAnalysis decode_sentence(const std::vector<std::string>& words,
                                        const std::vector<LogitBundle>& bundles,
                                        const ProcliticGrammar& grammar,
                                        const std::vector<std::string>& suffix_functions =
                                            default_suffix_functions()) {
  if (words.size() != bundles.size()) {
    throw std::invalid_argument("bundle count does not match word count");
  }
  SentenceAnalysis out;
  out.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    out.push_back(decode_word(words[i], bundles[i], grammar, suffix_functions));
  }
  return out;
}

/**
 * One bundle per tokenization position (as a per-piece model head emits);
 * each word is decoded from the bundle at its first piece.
 */
inline SentenceAnalysis decode_sentence(const TokenizedText& tok,
                                        const std::vector<LogitBundle>& bundles,
                                        const ProcliticGrammar& grammar,
                                        const std::vector<std::string>& suffix_functions =
                                            default_suffix_functions()) {
  if (tok.ids.size() != bundles.size()) {
    throw std::invalid_argument("bundle count does not match tokenization length");
  }
  SentenceAnalysis out;
  for (size_t p = 0; p < tok.ids.size(); ++p) {
    if (!tok.first_piece[p]) continue;
    const auto& word = tok.words[static_cast<size_t>(tok.word_index[p])];
    out.push_back(decode_word(word.text, bundles[p], grammar, suffix_functions));
  }
  return out;
}

inline nlohmann::ordered_json analysis_to_json(const WordAnalysis& a,
                                               const ProcliticGrammar& grammar,
                                               const std::vector<std::string>& suffix_functions) {
  nlohmann::ordered_json w;
  w["word"] = a.word;
  w["pos"] = kPosNames[static_cast<size_t>(a.pos)];
  w["feats"] = {{"gender", kGenderNames[static_cast<size_t>(a.features.gender)]},
                {"number", kNumberNames[static_cast<size_t>(a.features.number)]},
                {"person", kPersonNames[static_cast<size_t>(a.features.person)]},
                {"tense", kTenseNames[static_cast<size_t>(a.features.tense)]}};
  nlohmann::ordered_json pre;
  pre["functions"] = nlohmann::json::array();
  pre["segments"] = nlohmann::json::array();
  for (const auto& [surface, f] : a.proclitics.prefix_segments) {
    pre["functions"].push_back(grammar.rule(f).name);
    pre["segments"].push_back(surface);
  }
  pre["base"] = a.proclitics.base;
  pre["score"] = a.proclitics.score;
  w["prefixes"] = std::move(pre);
  w["suffix"] = {{"present", a.suffix.present},
                 {"function", suffix_functions.at(a.suffix.function)},
                 {"feats",
                  {{"gender", kGenderNames[static_cast<size_t>(a.suffix.features.gender)]},
                   {"number", kNumberNames[static_cast<size_t>(a.suffix.features.number)]},
                   {"person", kPersonNames[static_cast<size_t>(a.suffix.features.person)]}}}};
  return w;
}

/** Canonical serialization: fixed key order, NA spelled out, stable across runs. */
inline std::string render_analysis(const SentenceAnalysis& sentence,
                                   const ProcliticGrammar& grammar,
                                   const std::vector<std::string>& suffix_functions =
                                       default_suffix_functions()) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& a : sentence) {
    arr.push_back(analysis_to_json(a, grammar, suffix_functions));
  }
  return arr.dump();
}

namespace detail {

template <size_t N>
size_t name_index(const std::array<std::string_view, N>& names, const std::string& value,
                  const char* slot) {
  for (size_t i = 0; i < N; ++i) {
    if (names[i] == value) return i;
  }
  throw std::invalid_argument(std::string("unknown value for ") + slot + ": " + value);
}

}  // namespace detail

/** Inverse of render_analysis. */
inline SentenceAnalysis parse_analysis(const std::string& text,
                                       const ProcliticGrammar& grammar,
                                       const std::vector<std::string>& suffix_functions =
                                           default_suffix_functions()) {
  const nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("analysis must be a JSON array");
  SentenceAnalysis out;
  for (const auto& w : arr) {
    WordAnalysis a;
    a.word = w.at("word").get<std::string>();
    a.pos = static_cast<PosTag>(
        detail::name_index(kPosNames, w.at("pos").get<std::string>(), "pos"));
    const auto& feats = w.at("feats");
    a.features.gender = static_cast<Gender>(detail::name_index(
        kGenderNames, feats.at("gender").get<std::string>(), "gender"));
    a.features.number = static_cast<Number>(detail::name_index(
        kNumberNames, feats.at("number").get<std::string>(), "number"));
    a.features.person = static_cast<Person>(detail::name_index(
        kPersonNames, feats.at("person").get<std::string>(), "person"));
    a.features.tense = static_cast<Tense>(detail::name_index(
        kTenseNames, feats.at("tense").get<std::string>(), "tense"));

    const auto& pre = w.at("prefixes");
    const auto functions = pre.at("functions").get<std::vector<std::string>>();
    const auto segments = pre.at("segments").get<std::vector<std::string>>();
    if (functions.size() != segments.size()) {
      throw std::invalid_argument("prefix functions and segments must align");
    }
    for (size_t i = 0; i < functions.size(); ++i) {
      const size_t id = grammar.id_of(functions[i]);
      a.proclitics.functions.push_back(id);
      a.proclitics.prefix_segments.emplace_back(segments[i], id);
      a.proclitics.consumed += codepoint_count(segments[i]);
    }
    a.proclitics.base = pre.at("base").get<std::string>();
    a.proclitics.score = pre.at("score").get<double>();

    const auto& suf = w.at("suffix");
    a.suffix.present = suf.at("present").get<bool>();
    const std::string fn = suf.at("function").get<std::string>();
    a.suffix.function = suffix_functions.size();
    for (size_t i = 0; i < suffix_functions.size(); ++i) {
      if (suffix_functions[i] == fn) {
        a.suffix.function = i;
        break;
      }
    }
    if (a.suffix.function == suffix_functions.size()) {
      throw std::invalid_argument("unknown suffix function: " + fn);
    }
    const auto& sf = suf.at("feats");
    a.suffix.features.gender = static_cast<Gender>(detail::name_index(
        kGenderNames, sf.at("gender").get<std::string>(), "suffix gender"));
    a.suffix.features.number = static_cast<Number>(detail::name_index(
        kNumberNames, sf.at("number").get<std::string>(), "suffix number"));
    a.suffix.features.person = static_cast<Person>(detail::name_index(
        kPersonNames, sf.at("person").get<std::string>(), "suffix person"));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace hebkit
