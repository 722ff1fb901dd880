#include "idt/vocab.hpp"

#include <algorithm>
#include <map>

#include "idt/error.hpp"
#include "idt/text.hpp"

namespace idt {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text::is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !text::is_space(text[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && text::is_punct(text[b])) ++b;
    while (e > b && text::is_punct(text[e - 1])) --e;
    if (b < e) out.push_back(text::to_lower(text.substr(b, e - b)));
    i = j;
  }
  return out;
}

Vocab::Vocab() : Vocab(std::vector<std::string>{std::string(kUnkToken)}) {}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.front() != kUnkToken) {
    throw InvalidArgument("vocabulary must start with " + std::string(kUnkToken));
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw InvalidArgument("duplicate vocabulary token \"" + tokens_[i] + "\"");
    }
  }
}

TokenId Vocab::id(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocab::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

Vocab build_vocab(std::span<const std::vector<std::string>> sentences, std::size_t min_count) {
  if (min_count < 1) throw InvalidArgument("min_count must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sentences) {
    for (const auto& t : s) ++counts[t];
  }
  counts.erase(std::string(Vocab::kUnkToken));
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : counts) {
    if (n >= min_count) kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens{std::string(Vocab::kUnkToken)};
  for (auto& [tok, n] : kept) tokens.push_back(std::move(tok));
  return Vocab(std::move(tokens));
}

std::vector<TokenId> encode(const Vocab& vocab, std::span<const std::string> tokens) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id(t));
  return ids;
}

std::vector<TokenId> encode_text(const Vocab& vocab, std::string_view text) {
  const auto tokens = tokenize(text);
  return encode(vocab, tokens);
}

}  // namespace idt
