#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hebkit/unicode.hpp"
#include "hebkit/vocab.hpp"

namespace hebkit {

/**
 * Single-pass WordPiece matcher.
 *
 * Greedy longest-match-first tokenization normally restarts the trie walk
 * after every emitted piece, which is quadratic in the word length. This
 * structure walks the word once: whenever the next character has no trie
 * transition, a precomputed failure link jumps to the state the restart walk
 * would have reached, and the pieces that restart would have emitted along
 * the way are stored on the link. Output is identical to the greedy matcher.
 *
 * Word-initial pieces live under one root, continuation pieces (with the
 * "##" prefix stripped) under a second. Failure links always land in the
 * continuation trie at a strictly smaller depth, so links can be filled in
 * one breadth-first pass.
 */
class MatchTrie {
 public:
  struct EncodeStats {
    size_t transitions = 0;  // goto steps plus failure-link follows
  };

  static constexpr uint32_t kDead = 0xffffffffu;

  static MatchTrie build(const Vocabulary& vocab, size_t max_word_chars = 100) {
    MatchTrie t;
    t.max_word_chars_ = max_word_chars;
    t.unk_id_ = vocab.unk_id();
    t.nodes_.resize(2);

    for (int32_t id = 0; id < static_cast<int32_t>(vocab.size()); ++id) {
      const std::string& tok = vocab.token_of(id);
      t.insert(kInitialRoot, utf8_to_u32(tok), id);
      if (is_continuation_piece(tok)) {
        t.insert(kSuffixRoot, utf8_to_u32(tok.substr(kContinuationPrefix.size())), id);
      }
    }
    t.link();
    return t;
  }

  /** Tokenize one pretoken. Falls back to a single [UNK] id. */
  std::vector<int32_t> encode_word(std::u32string_view word,
                                   EncodeStats* stats = nullptr) const {
    std::vector<int32_t> out;
    if (word.empty()) return out;
    if (word.size() > max_word_chars_) return unk();

    uint32_t u = kInitialRoot;
    size_t steps = 0;
    for (char32_t c : word) {
      uint32_t next;
      while ((next = child(u, c)) == kDead) {
        const Node& n = nodes_[u];
        if (n.fail == kDead) {
          if (stats) stats->transitions += steps;
          return unk();
        }
        out.insert(out.end(), n.pops.begin(), n.pops.end());
        u = n.fail;
        ++steps;
      }
      u = next;
      ++steps;
    }
    while (u != kSuffixRoot && u != kInitialRoot) {
      const Node& n = nodes_[u];
      if (n.fail == kDead) {
        if (stats) stats->transitions += steps;
        return unk();
      }
      out.insert(out.end(), n.pops.begin(), n.pops.end());
      u = n.fail;
      ++steps;
    }
    if (stats) stats->transitions += steps;
    return out;
  }

  std::vector<int32_t> encode_word(std::string_view word,
                                   EncodeStats* stats = nullptr) const {
    return encode_word(std::u32string_view(utf8_to_u32(word)), stats);
  }

  size_t max_word_chars() const { return max_word_chars_; }

 private:
  struct Node {
    std::vector<std::pair<char32_t, uint32_t>> next;  // sorted by codepoint
    int32_t token = -1;
    uint32_t fail = kDead;
    std::vector<int32_t> pops;
  };

  static constexpr uint32_t kInitialRoot = 0;
  static constexpr uint32_t kSuffixRoot = 1;

  uint32_t child(uint32_t u, char32_t c) const {
    const auto& next = nodes_[u].next;
    auto it = std::lower_bound(next.begin(), next.end(), c,
                               [](const auto& e, char32_t v) { return e.first < v; });
    return (it != next.end() && it->first == c) ? it->second : kDead;
  }

  void insert(uint32_t root, const std::u32string& s, int32_t id) {
    uint32_t u = root;
    for (char32_t c : s) {
      uint32_t v = child(u, c);
      if (v == kDead) {
        v = static_cast<uint32_t>(nodes_.size());
        auto& next = nodes_[u].next;
        next.insert(std::lower_bound(next.begin(), next.end(), c,
                                     [](const auto& e, char32_t x) { return e.first < x; }),
                    {c, v});
        nodes_.emplace_back();
      }
      u = v;
    }
    nodes_[u].token = id;
  }

  void link() {
    // Parent and inbound character per node, then process by depth. A failure
    // link always points at a shallower continuation-trie node, so parents'
    // links and pops are final before any child consults them.
    const size_t n = nodes_.size();
    std::vector<uint32_t> parent(n, kDead);
    std::vector<char32_t> via(n, 0);
    std::vector<uint32_t> order;
    order.reserve(n);
    std::deque<uint32_t> queue{kInitialRoot, kSuffixRoot};
    while (!queue.empty()) {
      uint32_t u = queue.front();
      queue.pop_front();
      for (const auto& [c, v] : nodes_[u].next) {
        parent[v] = u;
        via[v] = c;
        order.push_back(v);
        queue.push_back(v);
      }
    }

    for (uint32_t u : order) {
      Node& node = nodes_[u];
      if (node.token >= 0) {
        node.pops = {node.token};
        node.fail = kSuffixRoot;
        continue;
      }
      const Node& p = nodes_[parent[u]];
      std::vector<int32_t> pops = p.pops;
      uint32_t z = p.fail;
      const char32_t c = via[u];
      while (z != kDead && child(z, c) == kDead) {
        const Node& zn = nodes_[z];
        pops.insert(pops.end(), zn.pops.begin(), zn.pops.end());
        z = zn.fail;
      }
      if (z != kDead) {
        node.fail = child(z, c);
        node.pops = std::move(pops);
      }
    }
  }

  std::vector<int32_t> unk() const {
    if (unk_id_ == Vocabulary::kNoId) {
      throw std::runtime_error("vocabulary has no [UNK] token");
    }
    return {unk_id_};
  }

  std::vector<Node> nodes_;
  int32_t unk_id_ = Vocabulary::kNoId;
  size_t max_word_chars_ = 100;
};

}  // namespace hebkit
