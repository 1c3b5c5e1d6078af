#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hebkit/match_trie.hpp"
#include "hebkit/pretokenizer.hpp"
#include "hebkit/vocab.hpp"

namespace hebkit {

/** Piece ids for a text plus the word structure they came from. */
struct TokenizedText {
  std::vector<int32_t> ids;
  std::vector<int32_t> word_index;   // index into words, -1 for [CLS]/[SEP]
  std::vector<uint8_t> first_piece;  // 1 on the first piece of each word
  std::vector<PreToken> words;

  size_t size() const { return ids.size(); }

  /** Piece count per word; single-piece words are the maskable ones. */
  std::vector<uint32_t> pieces_per_word() const {
    std::vector<uint32_t> counts(words.size(), 0);
    for (int32_t w : word_index) {
      if (w >= 0) ++counts[static_cast<size_t>(w)];
    }
    return counts;
  }
};

class Tokenizer {
 public:
  explicit Tokenizer(Vocabulary vocab, PretokenizerOptions opts = {})
      : vocab_(std::move(vocab)), trie_(MatchTrie::build(vocab_)), opts_(opts) {}

  const Vocabulary& vocab() const { return vocab_; }
  const MatchTrie& trie() const { return trie_; }

  TokenizedText encode(std::string_view text, MatchTrie::EncodeStats* stats = nullptr) const {
    TokenizedText out;
    out.words = pretokenize(normalize(text), opts_);
    for (size_t w = 0; w < out.words.size(); ++w) {
      const auto piece_ids = trie_.encode_word(std::string_view(out.words[w].text), stats);
      for (size_t i = 0; i < piece_ids.size(); ++i) {
        out.ids.push_back(piece_ids[i]);
        out.word_index.push_back(static_cast<int32_t>(w));
        out.first_piece.push_back(i == 0 ? 1 : 0);
      }
    }
    return out;
  }

  /** encode() wrapped in [CLS] ... [SEP]. */
  TokenizedText encode_sentence(std::string_view text,
                                MatchTrie::EncodeStats* stats = nullptr) const {
    if (vocab_.cls_id() == Vocabulary::kNoId || vocab_.sep_id() == Vocabulary::kNoId) {
      throw std::runtime_error("vocabulary has no [CLS]/[SEP] tokens");
    }
    TokenizedText out = encode(text, stats);
    out.ids.insert(out.ids.begin(), vocab_.cls_id());
    out.word_index.insert(out.word_index.begin(), -1);
    out.first_piece.insert(out.first_piece.begin(), 0);
    out.ids.push_back(vocab_.sep_id());
    out.word_index.push_back(-1);
    out.first_piece.push_back(0);
    return out;
  }

  std::vector<int32_t> encode_ids(std::string_view text) const { return encode(text).ids; }

 private:
  Vocabulary vocab_;
  MatchTrie trie_;
  PretokenizerOptions opts_;
};

}  // namespace hebkit
