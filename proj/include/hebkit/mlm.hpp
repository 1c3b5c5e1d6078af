#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hebkit/cleaner.hpp"
#include "hebkit/parallel.hpp"
#include "hebkit/rng.hpp"
#include "hebkit/tokenize.hpp"
#include "hebkit/unicode.hpp"
#include "hebkit/vocab.hpp"

namespace hebkit {

enum class BlankMode {
  kMask,      // the inserted slot holds [MASK]
  kIntruder,  // the inserted slot holds a random real piece
};

struct BuilderConfig {
  size_t max_len = 512;
  double mask_rate = 0.15;
  double replace_mask = 0.8;    // masked candidate becomes [MASK]
  double replace_random = 0.1;  // ... a random non-special piece
  double replace_keep = 0.1;    // ... stays itself (label still set)
  double blank_instance_prob = 0.10;
  BlankMode blank_mode = BlankMode::kMask;
  uint64_t seed = 0;

  void validate() const {
    if (max_len < 8) throw std::invalid_argument("max_len must be at least 8");
    for (double p : {mask_rate, replace_mask, replace_random, replace_keep,
                     blank_instance_prob}) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probabilities must lie in [0,1]");
      }
    }
    if (std::abs(replace_mask + replace_random + replace_keep - 1.0) > 1e-9) {
      throw std::invalid_argument("replace probabilities must sum to 1");
    }
  }
};

struct TrainingInstance {
  std::string doc_id;
  std::vector<int32_t> token_ids;
  std::vector<int32_t> mlm_positions;  // ascending
  std::vector<int32_t> mlm_labels;     // original ids, or [BLANK] for the inserted slot
  bool has_blank = false;
  uint32_t sentence_count = 0;
};

struct BuildReport {
  uint64_t instances = 0;
  uint64_t dropped_unk = 0;
  uint64_t dropped_oversize = 0;  // single sentences longer than max_len - 2
  uint64_t blanks = 0;
  uint64_t blank_skipped = 0;  // blank drawn but instance already at max_len
  uint64_t masked_positions = 0;
  uint64_t candidate_positions = 0;
  uint64_t no_candidate_instances = 0;
  uint64_t parse_errors = 0;

  BuildReport& operator+=(const BuildReport& o) {
    instances += o.instances;
    dropped_unk += o.dropped_unk;
    dropped_oversize += o.dropped_oversize;
    blanks += o.blanks;
    blank_skipped += o.blank_skipped;
    masked_positions += o.masked_positions;
    candidate_positions += o.candidate_positions;
    no_candidate_instances += o.no_candidate_instances;
    parse_errors += o.parse_errors;
    return *this;
  }
};

/**
 * Rule-based sentence splitter: a terminal mark (. ! ? or sof pasuq) ends a
 * sentence when followed by whitespace and then a Hebrew letter or capital
 * Latin letter. Word-internal abbreviation quotes survive pretokenization as
 * part of their word, so they can never split.
 */
inline std::vector<std::string> split_sentences(std::string_view text,
                                                PretokenizerOptions opts = {}) {
  const NormalizedText nt = normalize(text);
  const std::vector<PreToken> toks = pretokenize(nt, opts);

  auto is_terminal = [](const PreToken& t) {
    if (t.kind != PreTokenKind::Punct) return false;
    return t.text == "." || t.text == "!" || t.text == "?" || t.text == "\xD7\x83";
  };
  auto starts_sentence_after = [&](size_t byte_pos) {
    size_t i = byte_pos;
    bool saw_space = false;
    while (i < nt.text.size()) {
      const auto d = utf8_decode(nt.text, i);
      if (is_whitespace(d.cp)) {
        saw_space = true;
        i += d.bytes;
        continue;
      }
      return saw_space && (is_hebrew_letter(d.cp) || (d.cp >= U'A' && d.cp <= U'Z'));
    }
    return false;
  };

  std::vector<std::string> sentences;
  auto flush = [&](size_t begin, size_t end) {
    std::string_view piece(nt.text.data() + begin, end - begin);
    size_t i = 0;
    while (i < piece.size()) {
      const auto d = utf8_decode(piece, i);
      if (!is_whitespace(d.cp)) break;
      i += d.bytes;
    }
    size_t j = piece.size();
    while (j > i) {
      size_t k = j;
      do {
        --k;
      } while (k > i && (static_cast<unsigned char>(piece[k]) & 0xc0) == 0x80);
      const auto d = utf8_decode(piece, k);
      if (!is_whitespace(d.cp)) break;
      j = k;
    }
    if (j > i) sentences.emplace_back(piece.substr(i, j - i));
  };

  size_t begin = 0;
  for (const auto& t : toks) {
    if (is_terminal(t) && starts_sentence_after(t.end)) {
      flush(begin, t.end);
      begin = t.end;
    }
  }
  flush(begin, nt.text.size());
  return sentences;
}

namespace detail {

struct PackedInstance {
  std::vector<int32_t> ids;        // [CLS] s1 [SEP] s2 [SEP] ...
  std::vector<uint8_t> candidate;  // position is a single-piece word
  std::vector<uint8_t> blank_slot; // insertion point: word start or [SEP]
  uint32_t sentence_count = 0;
};

inline void append_sentence(PackedInstance& inst, const TokenizedText& sent,
                            int32_t sep_id) {
  const std::vector<uint32_t> pieces = sent.pieces_per_word();
  for (size_t i = 0; i < sent.ids.size(); ++i) {
    const int32_t w = sent.word_index[i];
    const bool single = pieces[static_cast<size_t>(w)] == 1;
    inst.ids.push_back(sent.ids[i]);
    inst.candidate.push_back(single ? 1 : 0);
    inst.blank_slot.push_back(sent.first_piece[i]);
  }
  inst.ids.push_back(sep_id);
  inst.candidate.push_back(0);
  inst.blank_slot.push_back(1);
  ++inst.sentence_count;
}

inline std::vector<PackedInstance> pack_instances(
    const std::vector<TokenizedText>& sentences, size_t max_len, int32_t cls_id,
    int32_t sep_id, uint64_t& dropped_oversize) {
  std::vector<PackedInstance> out;
  PackedInstance cur;
  auto open = [&] {
    cur = {};
    cur.ids.push_back(cls_id);
    cur.candidate.push_back(0);
    cur.blank_slot.push_back(0);
  };
  auto close = [&] {
    if (cur.sentence_count > 0) out.push_back(std::move(cur));
    open();
  };
  open();
  for (const auto& sent : sentences) {
    const size_t len = sent.ids.size();
    if (len == 0) continue;
    if (len > max_len - 2) {
      ++dropped_oversize;
      continue;
    }
    if (cur.ids.size() + len + 1 > max_len) close();
    append_sentence(cur, sent, sep_id);
  }
  close();
  return out;
}

}  // namespace detail

/** Balanced rounding of rate * count (ties to even), as used for mask counts. */
inline size_t mask_count(double rate, size_t candidates) {
  const double x = rate * static_cast<double>(candidates);
  const double n = std::nearbyint(x);  // default FE_TONEAREST rounds half to even
  return x <= 0.0 ? 0 : static_cast<size_t>(n);
}

/**
 * Document to training instances: sentence split, encode, pack whole
 * sentences up to max_len, reject any packed instance containing [UNK],
 * mask single-piece words, and insert the optional empty slot. The RNG
 * stream is derived from (seed, doc index, instance index), so results do
 * not depend on thread count.
 */
inline std::vector<TrainingInstance> build_instances(const Document& doc,
                                                     size_t doc_index,
                                                     const Tokenizer& tokenizer,
                                                     const BuilderConfig& config,
                                                     BuildReport& report) {
  const Vocabulary& vocab = tokenizer.vocab();
  const int32_t unk = vocab.unk_id();
  const int32_t mask = vocab.mask_id();
  const int32_t blank = vocab.blank_id();
  if (vocab.cls_id() == Vocabulary::kNoId || vocab.sep_id() == Vocabulary::kNoId ||
      unk == Vocabulary::kNoId || mask == Vocabulary::kNoId ||
      blank == Vocabulary::kNoId) {
    throw std::runtime_error("vocabulary is missing required special tokens");
  }
  std::vector<int32_t> replaceable;
  for (int32_t id = 0; id < static_cast<int32_t>(vocab.size()); ++id) {
    if (!vocab.is_special(id)) replaceable.push_back(id);
  }

  std::vector<TokenizedText> encoded;
  for (const auto& s : split_sentences(doc.text)) {
    encoded.push_back(tokenizer.encode(s));
  }
  std::vector<detail::PackedInstance> packed = detail::pack_instances(
      encoded, config.max_len, vocab.cls_id(), vocab.sep_id(), report.dropped_oversize);

  std::vector<TrainingInstance> out;
  for (size_t j = 0; j < packed.size(); ++j) {
    detail::PackedInstance& p = packed[j];
    if (std::find(p.ids.begin(), p.ids.end(), unk) != p.ids.end()) {
      ++report.dropped_unk;
      continue;
    }
    Rng rng(mix_seed(config.seed, doc_index, j));

    std::vector<int32_t> candidates;
    for (size_t i = 0; i < p.ids.size(); ++i) {
      if (p.candidate[i]) candidates.push_back(static_cast<int32_t>(i));
    }
    report.candidate_positions += candidates.size();
    if (candidates.empty()) ++report.no_candidate_instances;

    const size_t k = std::min(mask_count(config.mask_rate, candidates.size()),
                              candidates.size());
    for (size_t i = 0; i < k; ++i) {
      const size_t pick = i + rng.next_below(candidates.size() - i);
      std::swap(candidates[i], candidates[pick]);
    }
    std::vector<int32_t> chosen(candidates.begin(),
                                candidates.begin() + static_cast<ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());

    TrainingInstance inst;
    inst.doc_id = doc.id;
    inst.sentence_count = p.sentence_count;
    inst.token_ids = std::move(p.ids);
    for (int32_t pos : chosen) {
      inst.mlm_positions.push_back(pos);
      inst.mlm_labels.push_back(inst.token_ids[static_cast<size_t>(pos)]);
      const double r = rng.next_real();
      if (r < config.replace_mask) {
        inst.token_ids[static_cast<size_t>(pos)] = mask;
      } else if (r < config.replace_mask + config.replace_random) {
        if (replaceable.empty()) throw std::runtime_error("vocabulary has no non-special pieces");
        inst.token_ids[static_cast<size_t>(pos)] =
            replaceable[rng.next_below(replaceable.size())];
      }
    }
    report.masked_positions += k;

    if (rng.next_real() < config.blank_instance_prob) {
      if (inst.token_ids.size() + 1 > config.max_len) {
        ++report.blank_skipped;
      } else {
        std::vector<int32_t> slots;
        for (size_t i = 0; i < p.blank_slot.size(); ++i) {
          if (p.blank_slot[i]) slots.push_back(static_cast<int32_t>(i));
        }
        const int32_t at = slots[rng.next_below(slots.size())];
        int32_t filler = mask;
        if (config.blank_mode == BlankMode::kIntruder) {
          if (replaceable.empty()) throw std::runtime_error("vocabulary has no non-special pieces");
          filler = replaceable[rng.next_below(replaceable.size())];
        }
        inst.token_ids.insert(inst.token_ids.begin() + at, filler);
        for (auto& pos : inst.mlm_positions) {
          if (pos >= at) ++pos;
        }
        inst.mlm_positions.push_back(at);
        inst.mlm_labels.push_back(blank);
        inst.has_blank = true;
        ++report.blanks;

        std::vector<size_t> order(inst.mlm_positions.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
          return inst.mlm_positions[a] < inst.mlm_positions[b];
        });
        std::vector<int32_t> pos_sorted, lab_sorted;
        for (size_t idx : order) {
          pos_sorted.push_back(inst.mlm_positions[idx]);
          lab_sorted.push_back(inst.mlm_labels[idx]);
        }
        inst.mlm_positions = std::move(pos_sorted);
        inst.mlm_labels = std::move(lab_sorted);
      }
    }
    ++report.instances;
    out.push_back(std::move(inst));
  }
  return out;
}

/** Whole-corpus build; parallel over documents, output in input order. */
inline std::vector<TrainingInstance> build_corpus(const std::vector<Document>& docs,
                                                  const Tokenizer& tokenizer,
                                                  const BuilderConfig& config,
                                                  BuildReport& report,
                                                  size_t threads = 1) {
  config.validate();
  auto results = parallel_map(docs.size(), threads, [&](size_t d) {
    BuildReport local;
    auto insts = build_instances(docs[d], d, tokenizer, config, local);
    return std::make_pair(std::move(insts), local);
  });
  std::vector<TrainingInstance> out;
  for (auto& [insts, local] : results) {
    report += local;
    std::move(insts.begin(), insts.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace hebkit
