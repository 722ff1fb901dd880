#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace idt {

using TokenId = std::uint32_t;

// Lowercase, split on whitespace, strip leading/trailing ASCII punctuation
// from each piece, drop empties. ID...ID expression tokens come through as a
// single token.
std::vector<std::string> tokenize(std::string_view text);

class Vocab {
 public:
  static constexpr TokenId kUnkId = 0;
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocab();
  // tokens[0] must be kUnkToken; the rest must be unique.
  explicit Vocab(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(TokenId id) const { return tokens_.at(id); }

  // kUnkId for unknown tokens.
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

// Tokens with frequency >= min_count, by descending frequency then
// lexicographically, after the unknown token.
Vocab build_vocab(std::span<const std::vector<std::string>> sentences, std::size_t min_count = 1);

std::vector<TokenId> encode(const Vocab& vocab, std::span<const std::string> tokens);

// encode(vocab, tokenize(text))
std::vector<TokenId> encode_text(const Vocab& vocab, std::string_view text);

}  // namespace idt
