#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "idt/corpus.hpp"
#include "idt/pairs.hpp"

namespace idt {

// Knobs for the synthetic idiom world.
//
// A fixed inventory of n_idioms fabricated two-word expressions is shared by
// all groups: training groups cycle through it and held-out groups reuse it
// in fresh contexts, so held-out evaluation measures whether the learned
// expression meaning transfers to unseen sentences.
//
// Every group has one incorrect-paraphrase kind:
//   literal     the expression is replaced by its component words, one per
//               paraphrase (first component, then second), gold in [0.10, 0.25)
//   distractor  the expression is replaced by an unrelated word, gold in
//               [0.25, 0.40]
// Paraphrases beyond the second in a literal group fall back to distractors.
struct SyntheticOptions {
  std::uint64_t seed = 7;
  std::size_t n_groups = 200;
  std::size_t vocab_size = 500;
  std::size_t n_incorrect = 1;
  // Defaults derived from n_groups when left at 0: n_groups / 4 held-out
  // groups and n_groups / 10 idioms (at least one of each; the idiom count is
  // also capped by vocab_size).
  std::size_t n_heldout = 0;
  std::size_t n_idioms = 0;
  std::size_t min_context = 6;
  std::size_t max_context = 12;
  std::string language = "en";

  std::size_t resolved_heldout() const;
  std::size_t resolved_idioms() const;
};

struct SyntheticData {
  Corpus train;
  Corpus heldout;
  // Pairs over the held-out groups (subset idiom) plus one plain-sentence
  // pair per held-out group (subset sts, gold = fraction of shared words).
  std::vector<EvalPair> eval_pairs;
};

// Deterministic for a given options value. Throws InvalidArgument on sizes
// that cannot produce a valid corpus.
SyntheticData gen_synthetic(const SyntheticOptions& options);

}  // namespace idt
