#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "hebkit/mlm.hpp"
#include "hebkit/tokenize.hpp"
#include "hebkit/vocab.hpp"

using hebkit::BlankMode;
using hebkit::BuilderConfig;
using hebkit::BuildReport;
using hebkit::Document;
using hebkit::Tokenizer;
using hebkit::TrainingInstance;
using hebkit::Vocabulary;
using hebkit::build_corpus;
using hebkit::mask_count;
using hebkit::split_sentences;

namespace {

// Synthetic Latin vocabulary: every sentence and packing length below is
// hand-computable. "xyz" is the only multi-piece word (xy + ##z).
Vocabulary fixture_vocab() {
  return Vocabulary::from_tokens({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
                                  "[BLANK]", "Aa", "bb", "cc", "Dd", "ee", "ff",
                                  ".", "xy", "##z", "Gg", "A", "a"});
}

bool same_instance(const TrainingInstance& x, const TrainingInstance& y) {
  return x.doc_id == y.doc_id && x.token_ids == y.token_ids &&
         x.mlm_positions == y.mlm_positions && x.mlm_labels == y.mlm_labels &&
         x.has_blank == y.has_blank && x.sentence_count == y.sentence_count;
}

bool same_instances(const std::vector<TrainingInstance>& x,
                    const std::vector<TrainingInstance>& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!same_instance(x[i], y[i])) return false;
  }
  return true;
}

// Undoes masking and removes the inserted blank slot, recovering the packed
// token sequence as it was before any corruption.
std::vector<int32_t> restore(const TrainingInstance& inst, int32_t blank_id) {
  std::vector<int32_t> ids = inst.token_ids;
  int32_t blank_pos = -1;
  for (size_t i = 0; i < inst.mlm_positions.size(); ++i) {
    if (inst.mlm_labels[i] == blank_id) {
      blank_pos = inst.mlm_positions[i];
    } else {
      ids[static_cast<size_t>(inst.mlm_positions[i])] = inst.mlm_labels[i];
    }
  }
  if (blank_pos >= 0) ids.erase(ids.begin() + blank_pos);
  return ids;
}

// [CLS] s1 [SEP] s2 [SEP] -> {s1, s2}
std::vector<std::vector<int32_t>> segments_of(const std::vector<int32_t>& ids,
                                              int32_t cls_id, int32_t sep_id) {
  REQUIRE(!ids.empty());
  REQUIRE(ids.front() == cls_id);
  REQUIRE(ids.back() == sep_id);
  std::vector<std::vector<int32_t>> segments;
  std::vector<int32_t> cur;
  for (size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] == sep_id) {
      segments.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ids[i]);
    }
  }
  REQUIRE(cur.empty());
  return segments;
}

}  // namespace

TEST_CASE("sentence splitting follows terminal-then-capital evidence") {
  SECTION("Hebrew continuation splits") {
    CHECK(split_sentences("שלום רב. מה קורה? הכל טוב") ==
          std::vector<std::string>{"שלום רב.", "מה קורה?", "הכל טוב"});
  }
  SECTION("sof pasuq is a terminal mark") {
    CHECK(split_sentences("בראשית ברא׃ ויאמר אלהים") ==
          std::vector<std::string>{"בראשית ברא׃", "ויאמר אלהים"});
  }
  SECTION("capital Latin continuation splits") {
    CHECK(split_sentences("Aa bb. Dd ee") ==
          std::vector<std::string>{"Aa bb.", "Dd ee"});
  }
  SECTION("lowercase continuation does not split") {
    CHECK(split_sentences("Aa bb. dd ee") ==
          std::vector<std::string>{"Aa bb. dd ee"});
  }
  SECTION("no whitespace after the mark does not split") {
    CHECK(split_sentences("שלום.עולם טוב") ==
          std::vector<std::string>{"שלום.עולם טוב"});
  }
  SECTION("abbreviation quotes never terminate") {
    CHECK(split_sentences("הוא שירת בצה״ל שנים רבות") ==
          std::vector<std::string>{"הוא שירת בצה\"ל שנים רבות"});
  }
  SECTION("decimal points stay inside their number") {
    CHECK(split_sentences("המחיר 3.14 שקל") ==
          std::vector<std::string>{"המחיר 3.14 שקל"});
  }
  SECTION("trailing terminal keeps the final sentence whole") {
    CHECK(split_sentences("שלום עולם.") ==
          std::vector<std::string>{"שלום עולם."});
  }
  SECTION("blank input yields no sentences") {
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("   \n  ").empty());
  }
  SECTION("sentences come back trimmed") {
    const auto s = split_sentences("  שלום. אבג  ");
    REQUIRE(s.size() == 2);
    CHECK(s[0] == "שלום.");
    CHECK(s[1] == "אבג");
  }
}

TEST_CASE("mask counts round half to even") {
  CHECK(mask_count(0.5, 5) == 2);    // 2.5 -> 2
  CHECK(mask_count(0.5, 7) == 4);    // 3.5 -> 4
  CHECK(mask_count(0.25, 10) == 2);  // 2.5 -> 2
  CHECK(mask_count(0.25, 14) == 4);  // 3.5 -> 4
  CHECK(mask_count(0.15, 20) == 3);
  CHECK(mask_count(0.15, 8) == 1);
  CHECK(mask_count(0.15, 3) == 0);
  CHECK(mask_count(0.0, 100) == 0);
  CHECK(mask_count(1.0, 7) == 7);
  CHECK(mask_count(0.15, 0) == 0);
}

TEST_CASE("five-document corpus matches its hand-traced report") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  BuilderConfig config;
  config.max_len = 16;
  config.mask_rate = 0.15;
  config.blank_instance_prob = 0.0;
  config.seed = 7;

  const std::vector<Document> docs = {
      // two 4-id sentences pack together: 8 candidates, 1 masked
      {"docA", "Aa bb cc. Dd ee ff.", ""},
      // "qq" hits [UNK]; the whole packed instance goes, including "Dd ee."
      {"docB", "Aa qq. Dd ee.", ""},
      // first sentence is 15 ids with max_len-2 = 14: dropped, not truncated
      {"docC", "Aa bb cc Dd ee ff Gg Aa bb cc Dd ee ff Gg. Aa bb.", ""},
      // "xyz" pieces are never candidates: 6 of 12 positions qualify
      {"docD", "xyz Dd ee. Aa xyz bb.", ""},
      {"docE", "", ""},
  };

  BuildReport report;
  const auto out = build_corpus(docs, tokenizer, config, report);

  CHECK(report.instances == 3);
  CHECK(report.dropped_unk == 1);
  CHECK(report.dropped_oversize == 1);
  CHECK(report.candidate_positions == 17);  // 8 + 3 + 6
  CHECK(report.masked_positions == 2);      // 1 + 0 + 1
  CHECK(report.no_candidate_instances == 0);
  CHECK(report.blanks == 0);
  CHECK(report.blank_skipped == 0);

  REQUIRE(out.size() == 3);
  CHECK(out[0].doc_id == "docA");
  CHECK(out[1].doc_id == "docC");
  CHECK(out[2].doc_id == "docD");
  CHECK(out[0].token_ids.size() == 11);  // [CLS] + (4 + [SEP]) * 2
  CHECK(out[1].token_ids.size() == 5);
  CHECK(out[2].token_ids.size() == 13);  // [CLS] + (5 + [SEP]) * 2
  CHECK(out[0].sentence_count == 2);
  CHECK(out[1].sentence_count == 1);
  CHECK(out[2].sentence_count == 2);

  for (const auto& inst : out) {
    CHECK(inst.token_ids.size() <= config.max_len);
    CHECK(inst.token_ids.front() == vocab.cls_id());
    CHECK(inst.token_ids.back() == vocab.sep_id());
    for (size_t i = 1; i < inst.mlm_positions.size(); ++i) {
      CHECK(inst.mlm_positions[i - 1] < inst.mlm_positions[i]);
    }
    for (size_t i = 0; i < inst.mlm_positions.size(); ++i) {
      const auto pos = static_cast<size_t>(inst.mlm_positions[i]);
      const int32_t label = inst.mlm_labels[i];
      CHECK(!vocab.is_special(label));
      // the corrupted token is [MASK], the original, or a random real piece
      const int32_t tok = inst.token_ids[pos];
      CHECK((tok == vocab.mask_id() || !vocab.is_special(tok)));
    }
  }

  // multi-piece word pieces are never masking candidates
  const int32_t xy = vocab.id_of("xy");
  const int32_t zz = vocab.id_of("##z");
  for (int32_t label : out[2].mlm_labels) {
    CHECK(label != xy);
    CHECK(label != zz);
  }
}

TEST_CASE("an unknown piece rejects the whole packed instance") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  BuilderConfig config;
  config.max_len = 16;
  BuildReport report;
  const auto out =
      build_corpus({{"b", "Aa qq. Dd ee.", ""}}, tokenizer, config, report);
  CHECK(out.empty());
  CHECK(report.dropped_unk == 1);
  CHECK(report.instances == 0);
}

TEST_CASE("packing closes instances instead of splitting sentences") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);

  SECTION("three 100-id sentences at max_len 256 make exactly two instances") {
    std::string sentence = "A";
    for (int i = 0; i < 98; ++i) sentence += " a";
    sentence += ".";  // 100 ids: 99 words plus the terminal
    const std::string text = sentence + " " + sentence + " " + sentence;
    REQUIRE(split_sentences(text).size() == 3);

    BuilderConfig config;
    config.max_len = 256;
    config.blank_instance_prob = 0.0;
    BuildReport report;
    const auto out = build_corpus({{"p", text, ""}}, tokenizer, config, report);
    REQUIRE(out.size() == 2);
    CHECK(out[0].sentence_count == 2);
    CHECK(out[1].sentence_count == 1);
    CHECK(out[0].token_ids.size() == 203);  // 1 + 101 + 101
    CHECK(out[1].token_ids.size() == 102);
    CHECK(report.dropped_oversize == 0);
  }

  SECTION("a 600-id sentence at max_len 512 is dropped, never truncated") {
    std::string oversize = "A";
    for (int i = 0; i < 598; ++i) oversize += " a";
    oversize += ".";
    const std::string text = oversize + " Aa bb.";

    BuilderConfig config;
    config.max_len = 512;
    config.blank_instance_prob = 0.0;
    BuildReport report;
    const auto out = build_corpus({{"p", text, ""}}, tokenizer, config, report);
    CHECK(report.dropped_oversize == 1);
    REQUIRE(out.size() == 1);
    // only the short sentence survives, whole
    CHECK(out[0].token_ids.size() == 5);
    CHECK(out[0].sentence_count == 1);
  }
}

TEST_CASE("instances with no single-piece words are counted") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  BuilderConfig config;
  config.max_len = 16;
  config.blank_instance_prob = 0.0;
  BuildReport report;
  const auto out =
      build_corpus({{"m", "xyz xyz xyz", ""}}, tokenizer, config, report);
  REQUIRE(out.size() == 1);
  CHECK(out[0].mlm_positions.empty());
  CHECK(report.no_candidate_instances == 1);
  CHECK(report.candidate_positions == 0);
  CHECK(report.masked_positions == 0);
}

TEST_CASE("blank slot insertion preserves and shifts the instance") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  const Document doc{"docD", "xyz Dd ee. Aa xyz bb.", ""};

  // valid insertion points in the 13-id restored instance: word starts and
  // separator positions, never [CLS], never a continuation piece
  const std::set<int32_t> valid_slots = {1, 3, 4, 5, 6, 7, 8, 10, 11, 12};

  for (uint64_t seed = 0; seed < 100; ++seed) {
    BuilderConfig config;
    config.max_len = 16;
    config.blank_instance_prob = 1.0;
    config.seed = seed;
    BuildReport report;
    const auto out = build_corpus({doc}, tokenizer, config, report);
    REQUIRE(out.size() == 1);
    const auto& inst = out[0];
    REQUIRE(inst.has_blank);
    CHECK(report.blanks == 1);
    CHECK(inst.token_ids.size() == 14);

    int32_t blank_pos = -1;
    size_t blank_labels = 0;
    for (size_t i = 0; i < inst.mlm_positions.size(); ++i) {
      if (inst.mlm_labels[i] == vocab.blank_id()) {
        blank_pos = inst.mlm_positions[i];
        ++blank_labels;
      }
    }
    REQUIRE(blank_labels == 1);
    CHECK(valid_slots.count(blank_pos) == 1);
    CHECK(inst.token_ids[static_cast<size_t>(blank_pos)] == vocab.mask_id());
    for (size_t i = 1; i < inst.mlm_positions.size(); ++i) {
      CHECK(inst.mlm_positions[i - 1] < inst.mlm_positions[i]);
    }

    // removing the slot and unmasking recovers the original packed ids
    const auto restored = restore(inst, vocab.blank_id());
    const auto segments = segments_of(restored, vocab.cls_id(), vocab.sep_id());
    const auto sentences = split_sentences(doc.text);
    REQUIRE(segments.size() == sentences.size());
    for (size_t s = 0; s < segments.size(); ++s) {
      CHECK(segments[s] == tokenizer.encode(sentences[s]).ids);
    }
  }
}

TEST_CASE("blank insertion is skipped at exactly max_len") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  BuilderConfig config;
  config.max_len = 8;
  config.blank_instance_prob = 1.0;
  BuildReport report;
  // [CLS] A a a a a . [SEP] is exactly 8 ids
  const auto out =
      build_corpus({{"t", "A a a a a.", ""}}, tokenizer, config, report);
  REQUIRE(out.size() == 1);
  CHECK_FALSE(out[0].has_blank);
  CHECK(out[0].token_ids.size() == 8);
  CHECK(report.blank_skipped == 1);
  CHECK(report.blanks == 0);
}

TEST_CASE("intruder mode fills the slot with a real piece") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    BuilderConfig config;
    config.max_len = 16;
    config.blank_instance_prob = 1.0;
    config.blank_mode = BlankMode::kIntruder;
    config.seed = seed;
    BuildReport report;
    const auto out =
        build_corpus({{"t", "Aa bb cc. Dd ee ff.", ""}}, tokenizer, config, report);
    REQUIRE(out.size() == 1);
    const auto& inst = out[0];
    REQUIRE(inst.has_blank);
    for (size_t i = 0; i < inst.mlm_positions.size(); ++i) {
      if (inst.mlm_labels[i] == vocab.blank_id()) {
        const int32_t tok =
            inst.token_ids[static_cast<size_t>(inst.mlm_positions[i])];
        CHECK_FALSE(vocab.is_special(tok));
      }
    }
  }
}

TEST_CASE("replacement extremes behave as their probabilities dictate") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  const Document doc{"r", "Aa bb cc. Dd ee ff. Aa bb cc. Dd ee ff.", ""};

  auto masked_tokens = [&](double m, double r, double k) {
    BuilderConfig config;
    config.max_len = 64;
    config.blank_instance_prob = 0.0;
    config.replace_mask = m;
    config.replace_random = r;
    config.replace_keep = k;
    config.seed = 3;
    BuildReport report;
    const auto out = build_corpus({doc}, tokenizer, config, report);
    REQUIRE(out.size() == 1);
    std::vector<std::pair<int32_t, int32_t>> pairs;  // (token now, label)
    const auto& inst = out[0];
    for (size_t i = 0; i < inst.mlm_positions.size(); ++i) {
      pairs.emplace_back(inst.token_ids[static_cast<size_t>(inst.mlm_positions[i])],
                         inst.mlm_labels[i]);
    }
    REQUIRE(!pairs.empty());
    return pairs;
  };

  SECTION("always mask") {
    for (const auto& [tok, label] : masked_tokens(1.0, 0.0, 0.0)) {
      CHECK(tok == vocab.mask_id());
      CHECK(label != vocab.mask_id());
    }
  }
  SECTION("always keep") {
    for (const auto& [tok, label] : masked_tokens(0.0, 0.0, 1.0)) {
      CHECK(tok == label);
    }
  }
  SECTION("always random piece") {
    for (const auto& [tok, label] : masked_tokens(0.0, 1.0, 0.0)) {
      CHECK_FALSE(vocab.is_special(tok));
      CHECK(tok != vocab.mask_id());
      (void)label;
    }
  }
}

TEST_CASE("builds are deterministic in seed and thread count") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  std::vector<Document> docs;
  for (int d = 0; d < 12; ++d) {
    std::string text;
    for (int s = 0; s < 5; ++s) text += "Aa bb cc Dd. Gg ee ff. ";
    docs.push_back({"doc" + std::to_string(d), text, ""});
  }
  BuilderConfig config;
  config.max_len = 32;
  config.seed = 9;

  BuildReport r1, r2, r4;
  const auto a = build_corpus(docs, tokenizer, config, r1);
  const auto b = build_corpus(docs, tokenizer, config, r2);
  const auto c = build_corpus(docs, tokenizer, config, r4, 4);
  REQUIRE(!a.empty());
  CHECK(same_instances(a, b));
  CHECK(same_instances(a, c));
  CHECK(r1.instances == r4.instances);
  CHECK(r1.masked_positions == r4.masked_positions);
  CHECK(r1.blanks == r4.blanks);

  BuilderConfig other = config;
  other.seed = 10;
  BuildReport r3;
  const auto d = build_corpus(docs, tokenizer, other, r3);
  CHECK_FALSE(same_instances(a, d));
}

TEST_CASE("builder configuration is validated") {
  const Vocabulary vocab = fixture_vocab();
  const Tokenizer tokenizer(vocab);
  BuildReport report;

  BuilderConfig tiny;
  tiny.max_len = 4;
  CHECK_THROWS_AS(build_corpus({}, tokenizer, tiny, report), std::invalid_argument);

  BuilderConfig rate;
  rate.mask_rate = 1.5;
  CHECK_THROWS_AS(build_corpus({}, tokenizer, rate, report), std::invalid_argument);

  BuilderConfig sums;
  sums.replace_mask = 0.5;
  sums.replace_random = 0.1;
  sums.replace_keep = 0.1;
  CHECK_THROWS_AS(build_corpus({}, tokenizer, sums, report), std::invalid_argument);
}

TEST_CASE("builder requires the full set of special tokens") {
  const Vocabulary vocab =
      Vocabulary::from_tokens({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "a"});
  const Tokenizer tokenizer(vocab);
  BuildReport report;
  CHECK_THROWS_AS(build_corpus({{"x", "a a a.", ""}}, tokenizer,
                               BuilderConfig{}, report),
                  std::runtime_error);
}
