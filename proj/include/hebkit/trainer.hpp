#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hebkit/pretokenizer.hpp"
#include "hebkit/unicode.hpp"
#include "hebkit/vocab.hpp"

namespace hebkit {

struct TrainerConfig {
  size_t target_size = 128000;
  uint64_t min_char_freq = 10;  // characters seen fewer times are dropped from the alphabet
  std::vector<std::string> specials = default_specials();
};

namespace detail {

struct TrainWord {
  std::vector<int32_t> pieces;  // current segmentation, indices into the piece table
  uint64_t count = 0;
};

}  // namespace detail

// Iterative pair-merge WordPiece training seeded from single characters.
// Pair score = pair_frequency / (left_frequency * right_frequency); ties are
// broken toward the earlier-created left piece, then the earlier right piece,
// which makes the result a deterministic function of corpus order.
inline Vocabulary train_vocab(const std::vector<std::string>& documents,
                              const TrainerConfig& config = {}) {
  // Pre-token frequency in first-seen order.
  std::vector<std::pair<std::u32string, uint64_t>> words;
  std::unordered_map<std::string, size_t> word_index;
  for (const auto& doc : documents) {
    for (const auto& tok : pretokenize(normalize(doc))) {
      auto [it, inserted] = word_index.emplace(tok.text, words.size());
      if (inserted) {
        words.emplace_back(utf8_to_u32(tok.text), 1);
      } else {
        ++words[it->second].second;
      }
    }
  }
  if (words.empty()) throw std::runtime_error("empty training corpus");

  // Character frequencies, weighted by word count, in first-seen order.
  std::vector<std::pair<char32_t, uint64_t>> chars;
  std::unordered_map<char32_t, size_t> char_index;
  for (const auto& [w, count] : words) {
    for (char32_t cp : w) {
      auto [it, inserted] = char_index.emplace(cp, chars.size());
      if (inserted) {
        chars.emplace_back(cp, count);
      } else {
        chars[it->second].second += count;
      }
    }
  }

  // Piece table. Each retained character contributes both its word-initial
  // and its continuation form.
  std::vector<std::string> piece_strs;
  std::unordered_map<std::string, int32_t> piece_ids;
  auto intern_piece = [&](std::string s) -> int32_t {
    auto it = piece_ids.find(s);
    if (it != piece_ids.end()) return it->second;
    int32_t id = static_cast<int32_t>(piece_strs.size());
    piece_ids.emplace(s, id);
    piece_strs.push_back(std::move(s));
    return id;
  };

  std::unordered_map<char32_t, int32_t> head_piece, tail_piece;
  for (const auto& [cp, freq] : chars) {
    if (freq < config.min_char_freq) continue;
    std::string head, tail(kContinuationPrefix);
    utf8_append(head, cp);
    utf8_append(tail, cp);
    head_piece[cp] = intern_piece(std::move(head));
    tail_piece[cp] = intern_piece(std::move(tail));
  }

  if (config.target_size < config.specials.size() + piece_strs.size()) {
    throw std::invalid_argument("target size too small for specials plus alphabet");
  }

  // Initial segmentation; words with an out-of-alphabet character are left
  // out of merge counting (they would encode to [UNK] anyway).
  std::vector<detail::TrainWord> train_words;
  train_words.reserve(words.size());
  for (const auto& [w, count] : words) {
    detail::TrainWord tw;
    tw.count = count;
    bool ok = true;
    for (size_t i = 0; i < w.size(); ++i) {
      const auto& table = i == 0 ? head_piece : tail_piece;
      auto it = table.find(w[i]);
      if (it == table.end()) {
        ok = false;
        break;
      }
      tw.pieces.push_back(it->second);
    }
    if (ok) train_words.push_back(std::move(tw));
  }

  size_t vocab_size = config.specials.size() + piece_strs.size();

  while (vocab_size < config.target_size) {
    // Count piece and adjacent-pair frequencies over the current segmentation.
    std::vector<uint64_t> piece_freq(piece_strs.size(), 0);
    std::vector<std::pair<int32_t, int32_t>> pair_order;
    std::unordered_map<uint64_t, uint64_t> pair_freq;
    auto pair_key = [](int32_t a, int32_t b) {
      return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
             static_cast<uint32_t>(b);
    };
    for (const auto& tw : train_words) {
      for (size_t i = 0; i < tw.pieces.size(); ++i) {
        piece_freq[static_cast<size_t>(tw.pieces[i])] += tw.count;
        if (i + 1 < tw.pieces.size()) {
          uint64_t key = pair_key(tw.pieces[i], tw.pieces[i + 1]);
          auto [it, inserted] = pair_freq.emplace(key, tw.count);
          if (inserted) {
            pair_order.emplace_back(tw.pieces[i], tw.pieces[i + 1]);
          } else {
            it->second += tw.count;
          }
        }
      }
    }
    if (pair_order.empty()) break;

    double best_score = -1.0;
    std::pair<int32_t, int32_t> best{0, 0};
    for (const auto& [l, r] : pair_order) {
      const uint64_t pf = pair_freq[pair_key(l, r)];
      const double score = static_cast<double>(pf) /
                           (static_cast<double>(piece_freq[static_cast<size_t>(l)]) *
                            static_cast<double>(piece_freq[static_cast<size_t>(r)]));
      if (score > best_score ||
          (score == best_score && (l < best.first || (l == best.first && r < best.second)))) {
        best_score = score;
        best = {l, r};
      }
    }

    const std::string& left = piece_strs[static_cast<size_t>(best.first)];
    const std::string& right = piece_strs[static_cast<size_t>(best.second)];
    std::string merged_str = left + right.substr(kContinuationPrefix.size());
    const bool is_new = piece_ids.find(merged_str) == piece_ids.end();
    const int32_t merged = intern_piece(std::move(merged_str));
    if (is_new) ++vocab_size;

    for (auto& tw : train_words) {
      auto& p = tw.pieces;
      size_t out = 0;
      for (size_t i = 0; i < p.size();) {
        if (i + 1 < p.size() && p[i] == best.first && p[i + 1] == best.second) {
          p[out++] = merged;
          i += 2;
        } else {
          p[out++] = p[i++];
        }
      }
      p.resize(out);
    }
  }

  Vocabulary vocab;
  for (const auto& s : config.specials) vocab.add(s);
  for (const auto& s : piece_strs) vocab.add(s);
  return vocab;
}

}  // namespace hebkit
