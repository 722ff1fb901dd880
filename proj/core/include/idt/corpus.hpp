#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idt {

using Label = std::uint32_t;

enum class Role { Mwe, Correct, Incorrect };

std::string_view to_string(Role role);

// One idiomatic expression with the sentence that uses it and its
// correct / incorrect paraphrases. Paraphrases are the MWE sentence with
// the expression span rewritten.
struct RawGroup {
  std::string group_id;
  std::string language;
  std::string ie_surface;
  std::string mwe_sentence;
  std::vector<std::string> correct_paraphrases;
  std::vector<std::string> incorrect_paraphrases;

  bool operator==(const RawGroup&) const = default;
};

struct LabeledSentence {
  std::string text;
  Label label = 0;
  std::string group_id;
  Role role = Role::Mwe;

  bool operator==(const LabeledSentence&) const = default;
};

// groups are kept as loaded (raw surface text); derived holds the
// preprocessed, relabeled sentence stream in corpus order.
struct Corpus {
  std::vector<RawGroup> groups;
  std::vector<LabeledSentence> derived;

  bool operator==(const Corpus&) const = default;
};

// Replaces the first case-insensitive occurrence of ie_surface with the
// single token "ID<folded surface>ID", where the surface is lowercased and
// stripped of non-alphanumeric characters. Throws DataError if the surface
// does not occur; group_id only decorates the message.
std::string preprocess_ie(std::string_view sentence, std::string_view ie_surface,
                          std::string_view group_id = {});

// The token preprocess_ie substitutes for ie_surface.
std::string ie_token(std::string_view ie_surface);

// Throws DataError naming the group and field on the first violated
// invariant.
void validate_group(const RawGroup& group);

// Single left-to-right pass: the MWE sentence and every correct paraphrase
// of a group share one fresh label; each incorrect paraphrase gets its own.
// MWE text is run through preprocess_ie.
std::vector<LabeledSentence> relabel(std::span<const RawGroup> groups);

// Re-derives labels for an already-labeled stream from (group_id, role)
// alone, using the same counter discipline.
std::vector<LabeledSentence> relabel(std::span<const LabeledSentence> sentences);

// Validates every group (plus group_id uniqueness) and derives the
// labeled stream.
Corpus make_corpus(std::vector<RawGroup> groups);

// JSONL, one RawGroup object per line. Blank lines are skipped.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, std::span<const RawGroup> groups);

}  // namespace idt
