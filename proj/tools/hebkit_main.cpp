#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hebkit/hebkit.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InStream {
  std::ifstream file;
  std::istream* stream = nullptr;
};

InStream open_input(const std::string& path) {
  InStream in;
  if (path == "-") {
    in.stream = &std::cin;
    return in;
  }
  in.file.open(path, std::ios::binary);
  if (!in.file) throw InputError("cannot open input file: " + path);
  in.stream = &in.file;
  return in;
}

struct OutStream {
  std::ofstream file;
  std::ostream* stream = nullptr;
};

OutStream open_output(const std::string& path) {
  OutStream out;
  if (path == "-") {
    out.stream = &std::cout;
    return out;
  }
  out.file.open(path, std::ios::binary);
  if (!out.file) throw InputError("cannot open output file: " + path);
  out.stream = &out.file;
  return out;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown config key '" + key + "' in " + where);
    }
  }
}

const std::set<std::string> kFilterKeys = {
    "min_words",         "max_foreign_char_ratio", "max_repeat_run",
    "entropy_low",       "entropy_high",           "min_letter_ratio",
    "scorer_min_score",  "enable_min_words",       "enable_script_ratio",
    "enable_gibberish",  "enable_scorer"};

hebkit::FilterConfig filter_from_json(const json& j, hebkit::FilterConfig cfg,
                                      const std::string& where) {
  reject_unknown_keys(j, kFilterKeys, where);
  try {
    cfg.min_words = j.value("min_words", cfg.min_words);
    cfg.max_foreign_char_ratio = j.value("max_foreign_char_ratio", cfg.max_foreign_char_ratio);
    cfg.max_repeat_run = j.value("max_repeat_run", cfg.max_repeat_run);
    cfg.entropy_low = j.value("entropy_low", cfg.entropy_low);
    cfg.entropy_high = j.value("entropy_high", cfg.entropy_high);
    cfg.min_letter_ratio = j.value("min_letter_ratio", cfg.min_letter_ratio);
    cfg.scorer_min_score = j.value("scorer_min_score", cfg.scorer_min_score);
    cfg.enable_min_words = j.value("enable_min_words", cfg.enable_min_words);
    cfg.enable_script_ratio = j.value("enable_script_ratio", cfg.enable_script_ratio);
    cfg.enable_gibberish = j.value("enable_gibberish", cfg.enable_gibberish);
    cfg.enable_scorer = j.value("enable_scorer", cfg.enable_scorer);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value in ") + where + ": " + e.what());
  }
  return cfg;
}

hebkit::Vocabulary load_vocab(const std::string& path) {
  try {
    return hebkit::Vocabulary::load(path);
  } catch (const std::exception& e) {
    throw InputError(std::string("cannot load vocabulary: ") + e.what());
  }
}

hebkit::ProcliticGrammar load_grammar(const std::string& path) {
  if (path.empty()) return hebkit::ProcliticGrammar::standard();
  std::ifstream in(path);
  if (!in) throw InputError("cannot open grammar file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("grammar file is not valid JSON: ") + e.what());
  }
  try {
    return hebkit::ProcliticGrammar::from_json(j);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------- subcommands

struct TrainArgs {
  std::string input = "-";
  std::string output;
  std::string config;
  size_t target_size = 128000;
  uint64_t min_char_freq = 10;
  CLI::Option* target_size_opt = nullptr;
  CLI::Option* min_char_freq_opt = nullptr;
};

int run_train(const TrainArgs& a) {
  size_t target_size = a.target_size;
  uint64_t min_char_freq = a.min_char_freq;
  if (!a.config.empty()) {
    const json j = load_config_file(a.config);
    reject_unknown_keys(j, {"target_size", "min_char_freq"}, "config file");
    target_size = j.value("target_size", target_size);
    min_char_freq = j.value("min_char_freq", min_char_freq);
  }
  if (a.target_size_opt->count()) target_size = a.target_size;
  if (a.min_char_freq_opt->count()) min_char_freq = a.min_char_freq;

  auto in = open_input(a.input);
  uint64_t parse_errors = 0;
  const auto docs = hebkit::read_documents(*in.stream, &parse_errors);
  std::cerr << "read " << docs.size() << " documents (" << parse_errors
            << " parse errors)\n";
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const auto& doc : docs) texts.push_back(doc.text);
  hebkit::Vocabulary vocab;
  try {
    vocab = hebkit::train_vocab(texts, {.target_size = target_size,
                                        .min_char_freq = min_char_freq});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
  vocab.save(a.output);
  std::cerr << "wrote " << vocab.size() << " pieces to " << a.output << "\n";
  return 0;
}

struct EncodeArgs {
  std::string vocab;
  std::string input = "-";
  std::string output = "-";
  bool sentence = false;
  bool pieces = false;
  bool stats = false;
};

int run_encode(const EncodeArgs& a) {
  const hebkit::Tokenizer tokenizer(load_vocab(a.vocab));
  auto in = open_input(a.input);
  auto out = open_output(a.output);
  hebkit::MatchTrie::EncodeStats st;
  uint64_t chars = 0;
  std::string line;
  while (std::getline(*in.stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const hebkit::TokenizedText enc =
        a.sentence ? tokenizer.encode_sentence(line, a.stats ? &st : nullptr)
                   : tokenizer.encode(line, a.stats ? &st : nullptr);
    chars += hebkit::codepoint_count(line);
    ordered_json j{{"ids", enc.ids}};
    if (a.pieces) {
      std::vector<std::string> names;
      names.reserve(enc.ids.size());
      for (int32_t id : enc.ids) names.push_back(tokenizer.vocab().token_of(id));
      j["pieces"] = names;
    }
    *out.stream << j.dump() << '\n';
  }
  if (a.stats) {
    std::cerr << "transitions=" << st.transitions << " chars=" << chars << "\n";
  }
  return 0;
}

struct CleanArgs {
  std::string input = "-";
  std::string output = "-";
  std::string report;
  std::string config;
  bool trigram_scorer = false;
  size_t drop_samples = 0;
  hebkit::FilterConfig flags;
  CLI::Option* min_words = nullptr;
  CLI::Option* max_foreign = nullptr;
  CLI::Option* max_repeat = nullptr;
  CLI::Option* entropy_low = nullptr;
  CLI::Option* entropy_high = nullptr;
  CLI::Option* min_letter = nullptr;
  CLI::Option* scorer_min = nullptr;
  CLI::Option* no_min_words = nullptr;
  CLI::Option* no_script = nullptr;
  CLI::Option* no_gibberish = nullptr;
};

int run_clean(const CleanArgs& a) {
  hebkit::CleanerConfig cfg;
  if (!a.config.empty()) {
    const json j = load_config_file(a.config);
    std::set<std::string> allowed = kFilterKeys;
    allowed.insert("per_source");
    reject_unknown_keys(j, allowed, "config file");
    cfg.base = filter_from_json(j, cfg.base, "config file");
    if (j.contains("per_source")) {
      if (!j["per_source"].is_object()) {
        throw ConfigError("per_source must map source names to filter settings");
      }
      for (const auto& [source, sub] : j["per_source"].items()) {
        cfg.per_source[source] =
            filter_from_json(sub, cfg.base, "per_source '" + source + "'");
      }
    }
  }
  auto apply_flag_overrides = [&](hebkit::FilterConfig& f) {
    if (a.min_words->count()) f.min_words = a.flags.min_words;
    if (a.max_foreign->count()) f.max_foreign_char_ratio = a.flags.max_foreign_char_ratio;
    if (a.max_repeat->count()) f.max_repeat_run = a.flags.max_repeat_run;
    if (a.entropy_low->count()) f.entropy_low = a.flags.entropy_low;
    if (a.entropy_high->count()) f.entropy_high = a.flags.entropy_high;
    if (a.min_letter->count()) f.min_letter_ratio = a.flags.min_letter_ratio;
    if (a.scorer_min->count()) f.scorer_min_score = a.flags.scorer_min_score;
    if (a.no_min_words->count()) f.enable_min_words = false;
    if (a.no_script->count()) f.enable_script_ratio = false;
    if (a.no_gibberish->count()) f.enable_gibberish = false;
  };
  apply_flag_overrides(cfg.base);
  for (auto& [source, f] : cfg.per_source) apply_flag_overrides(f);

  auto in = open_input(a.input);
  uint64_t parse_errors = 0;
  const auto docs = hebkit::read_documents(*in.stream, &parse_errors);

  hebkit::DocumentScorer scorer;
  hebkit::TrigramScorer trigram;
  if (a.trigram_scorer) {
    for (const auto& doc : docs) trigram.fit(doc.text);
    scorer = trigram;
  }

  hebkit::CleanReport report;
  const auto kept = hebkit::clean_corpus(docs, cfg, &report, scorer, a.drop_samples);
  auto out = open_output(a.output);
  hebkit::write_documents(*out.stream, kept);

  ordered_json rj = hebkit::clean_report_to_json(report);
  rj["parse_errors"] = parse_errors;
  std::cerr << rj.dump() << "\n";
  if (!a.report.empty()) {
    auto rep = open_output(a.report);
    *rep.stream << rj.dump(2) << '\n';
  }
  return 0;
}

struct BuildArgs {
  std::string vocab;
  std::string input = "-";
  std::string output = "-";
  std::string report;
  std::string config;
  size_t threads = 1;
  hebkit::BuilderConfig flags;
  std::string blank_mode = "mask";
  CLI::Option* vocab_opt = nullptr;
  CLI::Option* max_len = nullptr;
  CLI::Option* mask_rate = nullptr;
  CLI::Option* blank_prob = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* replace_mask = nullptr;
  CLI::Option* replace_random = nullptr;
  CLI::Option* replace_keep = nullptr;
  CLI::Option* blank_mode_opt = nullptr;
};

int run_build(const BuildArgs& a) {
  hebkit::BuilderConfig cfg;
  std::string vocab_path = a.vocab;
  std::string blank_mode = a.blank_mode;
  if (!a.config.empty()) {
    const json j = load_config_file(a.config);
    reject_unknown_keys(j,
                        {"max_len", "mask_rate", "replace_mask", "replace_random",
                         "replace_keep", "blank_instance_prob", "blank_mode", "seed",
                         "vocab"},
                        "config file");
    try {
      cfg.max_len = j.value("max_len", cfg.max_len);
      cfg.mask_rate = j.value("mask_rate", cfg.mask_rate);
      cfg.replace_mask = j.value("replace_mask", cfg.replace_mask);
      cfg.replace_random = j.value("replace_random", cfg.replace_random);
      cfg.replace_keep = j.value("replace_keep", cfg.replace_keep);
      cfg.blank_instance_prob = j.value("blank_instance_prob", cfg.blank_instance_prob);
      cfg.seed = j.value("seed", cfg.seed);
      blank_mode = j.value("blank_mode", blank_mode);
      vocab_path = j.value("vocab", vocab_path);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad config value: ") + e.what());
    }
  }
  if (a.vocab_opt->count()) vocab_path = a.vocab;
  if (a.max_len->count()) cfg.max_len = a.flags.max_len;
  if (a.mask_rate->count()) cfg.mask_rate = a.flags.mask_rate;
  if (a.blank_prob->count()) cfg.blank_instance_prob = a.flags.blank_instance_prob;
  if (a.seed->count()) cfg.seed = a.flags.seed;
  if (a.replace_mask->count()) cfg.replace_mask = a.flags.replace_mask;
  if (a.replace_random->count()) cfg.replace_random = a.flags.replace_random;
  if (a.replace_keep->count()) cfg.replace_keep = a.flags.replace_keep;
  if (a.blank_mode_opt->count()) blank_mode = a.blank_mode;

  if (blank_mode == "mask") {
    cfg.blank_mode = hebkit::BlankMode::kMask;
  } else if (blank_mode == "intruder") {
    cfg.blank_mode = hebkit::BlankMode::kIntruder;
  } else {
    throw ConfigError("blank_mode must be 'mask' or 'intruder'");
  }
  if (vocab_path.empty()) throw ConfigError("build-mlm requires a vocabulary");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const hebkit::Tokenizer tokenizer(load_vocab(vocab_path));
  auto in = open_input(a.input);
  hebkit::BuildReport report;
  const auto docs = hebkit::read_documents(*in.stream, &report.parse_errors);
  const auto instances =
      hebkit::build_corpus(docs, tokenizer, cfg, report, std::max<size_t>(1, a.threads));
  auto out = open_output(a.output);
  hebkit::write_instances(*out.stream, instances);

  const ordered_json rj = hebkit::build_report_to_json(report);
  std::cerr << rj.dump() << "\n";
  if (!a.report.empty()) {
    auto rep = open_output(a.report);
    *rep.stream << rj.dump(2) << '\n';
  }
  return 0;
}

struct SegArgs {
  std::string grammar;
  std::string input = "-";
  std::string output = "-";
};

int run_seg_decode(const SegArgs& a) {
  const hebkit::ProcliticGrammar grammar = load_grammar(a.grammar);
  auto in = open_input(a.input);
  auto out = open_output(a.output);
  std::string line;
  size_t line_no = 0;
  while (std::getline(*in.stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    hebkit::SegmentationResult r;
    try {
      const json j = json::parse(line);
      r = hebkit::decode(j.at("word").get<std::string>(),
                         j.at("probs").get<std::vector<double>>(), grammar);
    } catch (const std::exception& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    ordered_json o;
    o["functions"] = ordered_json::array();
    o["segments"] = ordered_json::array();
    for (const auto& [surface, f] : r.prefix_segments) {
      o["functions"].push_back(grammar.rule(f).name);
      o["segments"].push_back(surface);
    }
    o["base"] = r.base;
    o["score"] = r.score;
    *out.stream << o.dump() << '\n';
  }
  return 0;
}

struct MorphArgs {
  std::string grammar;
  std::string input = "-";
  std::string output = "-";
};

hebkit::LogitBundle bundle_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"pos", "proclitic", "gender", "number", "person", "tense",
                       "suffix_function", "suffix_gender", "suffix_number",
                       "suffix_person"},
                      "bundle");
  hebkit::LogitBundle b;
  b.pos = j.at("pos").get<std::vector<double>>();
  b.proclitic = j.at("proclitic").get<std::vector<double>>();
  b.gender = j.at("gender").get<std::vector<double>>();
  b.number = j.at("number").get<std::vector<double>>();
  b.person = j.at("person").get<std::vector<double>>();
  b.tense = j.at("tense").get<std::vector<double>>();
  b.suffix_function = j.at("suffix_function").get<std::vector<double>>();
  b.suffix_gender = j.at("suffix_gender").get<std::vector<double>>();
  b.suffix_number = j.at("suffix_number").get<std::vector<double>>();
  b.suffix_person = j.at("suffix_person").get<std::vector<double>>();
  return b;
}

int run_morph_decode(const MorphArgs& a) {
  const hebkit::ProcliticGrammar grammar = load_grammar(a.grammar);
  auto in = open_input(a.input);
  auto out = open_output(a.output);
  std::string line;
  size_t line_no = 0;
  while (std::getline(*in.stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const json& arr = j.is_array() ? j : json::array({j});
      std::vector<std::string> words;
      std::vector<hebkit::LogitBundle> bundles;
      for (const auto& entry : arr) {
        words.push_back(entry.at("word").get<std::string>());
        bundles.push_back(bundle_from_json(entry.at("bundle")));
      }
      const auto analysis = hebkit::decode_sentence(words, bundles, grammar);
      *out.stream << hebkit::render_analysis(analysis, grammar) << '\n';
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return 0;
}

struct EvalArgs {
  std::string task;
  std::string gold;
  std::string pred;
  bool macro = false;
  bool remove_articles = false;
};

std::vector<json> read_json_lines(const std::string& path) {
  auto in = open_input(path);
  std::vector<json> lines;
  std::string line;
  size_t line_no = 0;
  while (std::getline(*in.stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      lines.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw InputError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lines;
}

int run_eval(const EvalArgs& a) {
  const auto gold = read_json_lines(a.gold);
  const auto pred = read_json_lines(a.pred);
  ordered_json result;
  try {
    if (a.task == "morph") {
      auto morphemes = [](const json& j) {
        hebkit::LabeledMorphemes m;
        for (const auto& item : j.at("morphemes")) {
          m.emplace_back(item.at("form").get<std::string>(),
                         item.at("label").get<std::string>());
        }
        return m;
      };
      if (gold.size() != pred.size()) {
        throw std::invalid_argument("gold and prediction sentence counts differ");
      }
      hebkit::MsetAccumulator acc;
      for (size_t i = 0; i < gold.size(); ++i) {
        acc.add(morphemes(gold[i]), morphemes(pred[i]));
      }
      const hebkit::PrfScore s = acc.micro();
      result = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
      if (a.macro) result["macro_f1"] = acc.macro_f1();
    } else if (a.task == "ner") {
      if (gold.size() != pred.size()) {
        throw std::invalid_argument("gold and prediction sentence counts differ");
      }
      hebkit::TokenF1Accumulator acc;
      for (size_t i = 0; i < gold.size(); ++i) {
        acc.add(gold[i].at("labels").get<std::vector<std::string>>(),
                pred[i].at("labels").get<std::vector<std::string>>());
      }
      const hebkit::PrfScore s = acc.score();
      result = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    } else if (a.task == "qa") {
      if (gold.size() != pred.size()) {
        throw std::invalid_argument("gold and prediction item counts differ");
      }
      hebkit::QaAccumulator acc({.remove_articles = a.remove_articles});
      for (size_t i = 0; i < gold.size(); ++i) {
        hebkit::QaItem item;
        item.gold = gold[i].at("answers").get<std::vector<std::string>>();
        item.pred = pred[i].at("answer").get<std::string>();
        acc.add(item);
      }
      const hebkit::QaScore s = acc.score();
      result = {{"em", s.em}, {"f1", s.f1}};
    } else if (a.task == "sentiment") {
      if (gold.size() != pred.size()) {
        throw std::invalid_argument("gold and prediction item counts differ");
      }
      hebkit::AccuracyAccumulator acc;
      for (size_t i = 0; i < gold.size(); ++i) {
        acc.add(gold[i].at("label").get<std::string>(),
                pred[i].at("label").get<std::string>());
      }
      result = {{"accuracy", acc.score()}};
    } else {
      throw ConfigError("unknown eval task: " + a.task);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  std::cout << result.dump() << "\n";
  return 0;
}

struct StatsArgs {
  std::string input = "-";
};

int run_stats(const StatsArgs& a) {
  auto in = open_input(a.input);
  uint64_t parse_errors = 0;
  const auto docs = hebkit::read_documents(*in.stream, &parse_errors);
  uint64_t words = 0;
  uint64_t chars = 0;
  uint64_t sentences = 0;
  for (const auto& doc : docs) {
    words += hebkit::count_words(doc.text);
    chars += hebkit::codepoint_count(doc.text);
    sentences += hebkit::split_sentences(doc.text).size();
  }
  const ordered_json j{{"documents", docs.size()},
                       {"words", words},
                       {"chars", chars},
                       {"sentences", sentences},
                       {"parse_errors", parse_errors}};
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hebrew corpus pipeline: tokenizer training, cleaning, MLM instance "
               "building, and constrained morphosyntactic decoding"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* sub_train = app.add_subcommand("tokenizer-train", "Train a WordPiece vocabulary");
  sub_train->add_option("--input", train.input, "Documents JSONL ('-' for stdin)");
  sub_train->add_option("--output", train.output, "Vocabulary file to write")->required();
  train.target_size_opt =
      sub_train->add_option("--target-size", train.target_size, "Total vocabulary size");
  train.min_char_freq_opt = sub_train->add_option("--min-char-freq", train.min_char_freq,
                                                  "Minimum character frequency");
  sub_train->add_option("--config", train.config, "JSON config file");

  EncodeArgs encode;
  auto* sub_encode = app.add_subcommand("encode", "Tokenize text lines to piece ids");
  sub_encode->add_option("--vocab", encode.vocab, "Vocabulary file")->required();
  sub_encode->add_option("--input", encode.input, "Text file, one line per record");
  sub_encode->add_option("--output", encode.output, "Output JSONL");
  sub_encode->add_flag("--sentence", encode.sentence, "Wrap lines in [CLS]/[SEP]");
  sub_encode->add_flag("--pieces", encode.pieces, "Also emit piece strings");
  sub_encode->add_flag("--stats", encode.stats, "Report trie transitions to stderr");

  CleanArgs clean;
  auto* sub_clean = app.add_subcommand("clean", "Filter a document stream");
  sub_clean->add_option("--input", clean.input, "Documents JSONL");
  sub_clean->add_option("--output", clean.output, "Kept documents JSONL");
  sub_clean->add_option("--report", clean.report, "Write the report JSON here too");
  sub_clean->add_option("--config", clean.config, "JSON config file");
  sub_clean->add_flag("--trigram-scorer", clean.trigram_scorer,
                      "Score documents with a self-fit character trigram model");
  sub_clean->add_option("--drop-samples", clean.drop_samples,
                        "Record up to N dropped document ids in the report");
  clean.min_words = sub_clean->add_option("--min-words", clean.flags.min_words,
                                          "Minimum word count");
  clean.max_foreign = sub_clean->add_option("--max-foreign-char-ratio",
                                            clean.flags.max_foreign_char_ratio,
                                            "Maximum non-Hebrew/Latin letter fraction");
  clean.max_repeat = sub_clean->add_option("--max-repeat-run", clean.flags.max_repeat_run,
                                           "Longest allowed identical-character run");
  clean.entropy_low = sub_clean->add_option("--entropy-low", clean.flags.entropy_low,
                                            "Lower character-entropy bound (bits)");
  clean.entropy_high = sub_clean->add_option("--entropy-high", clean.flags.entropy_high,
                                             "Upper character-entropy bound (bits)");
  clean.min_letter = sub_clean->add_option("--min-letter-ratio", clean.flags.min_letter_ratio,
                                           "Minimum letter fraction");
  clean.scorer_min = sub_clean->add_option("--scorer-min-score", clean.flags.scorer_min_score,
                                           "Drop documents scoring below this");
  clean.no_min_words = sub_clean->add_flag("--no-min-words", "Disable the word-count filter");
  clean.no_script = sub_clean->add_flag("--no-script-ratio", "Disable the script filter");
  clean.no_gibberish = sub_clean->add_flag("--no-gibberish", "Disable the gibberish filter");

  BuildArgs build;
  auto* sub_build = app.add_subcommand("build-mlm", "Build MLM training instances");
  build.vocab_opt = sub_build->add_option("--vocab", build.vocab, "Vocabulary file");
  sub_build->add_option("--input", build.input, "Cleaned documents JSONL");
  sub_build->add_option("--output", build.output, "Instances JSONL");
  sub_build->add_option("--report", build.report, "Write the report JSON here too");
  sub_build->add_option("--config", build.config, "JSON config file");
  build.max_len = sub_build->add_option("--max-len", build.flags.max_len,
                                        "Maximum instance length in pieces");
  build.mask_rate = sub_build->add_option("--mask-rate", build.flags.mask_rate,
                                          "Fraction of candidates to mask");
  build.blank_prob = sub_build->add_option("--blank-prob", build.flags.blank_instance_prob,
                                           "Fraction of instances given an empty slot");
  build.seed = sub_build->add_option("--seed", build.flags.seed, "RNG seed");
  build.replace_mask = sub_build->add_option("--replace-mask", build.flags.replace_mask,
                                             "P(masked position becomes [MASK])");
  build.replace_random = sub_build->add_option("--replace-random", build.flags.replace_random,
                                               "P(masked position becomes a random piece)");
  build.replace_keep = sub_build->add_option("--replace-keep", build.flags.replace_keep,
                                             "P(masked position keeps its piece)");
  build.blank_mode_opt = sub_build->add_option("--blank-mode", build.blank_mode,
                                               "Empty-slot filler: mask or intruder");
  sub_build->add_option("--threads", build.threads, "Worker threads");

  SegArgs seg;
  auto* sub_seg = app.add_subcommand("seg-decode", "Decode proclitic segmentations");
  sub_seg->add_option("--grammar", seg.grammar, "Grammar JSON (default: built-in)");
  sub_seg->add_option("--input", seg.input, "JSONL of {word, probs}");
  sub_seg->add_option("--output", seg.output, "Output JSONL");

  MorphArgs morph;
  auto* sub_morph = app.add_subcommand("morph-decode", "Decode full morphological analyses");
  sub_morph->add_option("--grammar", morph.grammar, "Grammar JSON (default: built-in)");
  sub_morph->add_option("--input", morph.input, "JSONL, one sentence per line");
  sub_morph->add_option("--output", morph.output, "Output JSONL");

  EvalArgs eval;
  auto* sub_eval = app.add_subcommand("eval", "Score predictions against gold");
  sub_eval->add_option("--task", eval.task, "morph | ner | qa | sentiment")->required();
  sub_eval->add_option("--gold", eval.gold, "Gold JSONL")->required();
  sub_eval->add_option("--pred", eval.pred, "Prediction JSONL")->required();
  sub_eval->add_flag("--macro", eval.macro, "Also report macro-averaged mset F1");
  sub_eval->add_flag("--remove-articles", eval.remove_articles,
                     "Strip English articles during QA normalization");

  StatsArgs stats;
  auto* sub_stats = app.add_subcommand("stats", "Corpus statistics");
  sub_stats->add_option("--input", stats.input, "Documents JSONL");

  try {
    app.parse(argc, argv);
    if (sub_train->parsed()) return run_train(train);
    if (sub_encode->parsed()) return run_encode(encode);
    if (sub_clean->parsed()) return run_clean(clean);
    if (sub_build->parsed()) return run_build(build);
    if (sub_seg->parsed()) return run_seg_decode(seg);
    if (sub_morph->parsed()) return run_morph_decode(morph);
    if (sub_eval->parsed()) return run_eval(eval);
    if (sub_stats->parsed()) return run_stats(stats);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
