#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hebkit {

inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr std::string_view kBlankToken = "[BLANK]";

inline std::vector<std::string> default_specials() {
  return {std::string(kPadToken), std::string(kUnkToken), std::string(kClsToken),
          std::string(kSepToken), std::string(kMaskToken), std::string(kBlankToken)};
}

inline constexpr std::string_view kContinuationPrefix = "##";

inline bool is_continuation_piece(std::string_view token) {
  return token.size() > 2 && token.substr(0, 2) == kContinuationPrefix;
}

// Dense token inventory: ids are 0..N-1 in list order. Continuation pieces
// carry the literal "##" prefix. Special tokens are ordinary entries whose
// ids are tracked so encoders and builders can treat them apart.
class Vocabulary {
 public:
  static constexpr int32_t kNoId = -1;

  Vocabulary() = default;

  static Vocabulary from_tokens(std::vector<std::string> tokens) {
    Vocabulary v;
    for (auto& t : tokens) v.add(std::move(t));
    return v;
  }

  int32_t add(std::string token) {
    if (token.empty()) throw std::invalid_argument("empty vocabulary token");
    auto [it, inserted] = ids_.emplace(token, static_cast<int32_t>(tokens_.size()));
    if (!inserted) throw std::invalid_argument("duplicate vocabulary token: " + token);
    if (is_special_string(token)) special_ids_.insert(it->second);
    tokens_.push_back(std::move(token));
    return static_cast<int32_t>(tokens_.size()) - 1;
  }

  int32_t id_of(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kNoId : it->second;
  }

  const std::string& token_of(int32_t id) const { return tokens_.at(static_cast<size_t>(id)); }
  size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  int32_t pad_id() const { return id_of(kPadToken); }
  int32_t unk_id() const { return id_of(kUnkToken); }
  int32_t cls_id() const { return id_of(kClsToken); }
  int32_t sep_id() const { return id_of(kSepToken); }
  int32_t mask_id() const { return id_of(kMaskToken); }
  int32_t blank_id() const { return id_of(kBlankToken); }

  bool is_special(int32_t id) const { return special_ids_.count(id) > 0; }
  size_t special_count() const { return special_ids_.size(); }

  // UTF-8 text, one token per line, line number = id, trailing newline required.
  void save(std::ostream& os) const {
    for (const auto& t : tokens_) os << t << '\n';
  }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write vocabulary file: " + path);
    save(os);
  }

  static Vocabulary load(std::istream& is) {
    Vocabulary v;
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) throw std::runtime_error("empty line in vocabulary file");
      v.add(line);
    }
    return v;
  }

  static Vocabulary load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open vocabulary file: " + path);
    return load(is);
  }

 private:
  static bool is_special_string(std::string_view t) {
    return t == kPadToken || t == kUnkToken || t == kClsToken || t == kSepToken ||
           t == kMaskToken || t == kBlankToken;
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int32_t> ids_;
  std::unordered_set<int32_t> special_ids_;
};

}  // namespace hebkit
