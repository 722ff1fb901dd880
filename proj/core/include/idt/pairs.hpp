#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idt {

enum class Subset { Idiom, Sts };

std::string_view to_string(Subset subset);
std::optional<Subset> parse_subset(std::string_view s);

// A scored sentence pair. Sentences are stored as the encoder should see
// them, i.e. with idiomatic expressions already collapsed to ID...ID tokens.
struct EvalPair {
  std::string sentence1;
  std::string sentence2;
  double gold_score = 0.0;
  Subset subset = Subset::Idiom;
  std::string language;

  bool operator==(const EvalPair&) const = default;
};

// TSV with header: sentence1, sentence2, gold_score, subset, language.
std::vector<EvalPair> load_eval_pairs(const std::filesystem::path& path);
void save_eval_pairs(const std::filesystem::path& path, std::span<const EvalPair> pairs);

}  // namespace idt
