#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idt/corpus.hpp"
#include "idt/encoder.hpp"
#include "idt/pairs.hpp"
#include "idt/vocab.hpp"

namespace idt {

// Cosine similarity of the two sentence embeddings. Throws InvalidArgument
// naming the sentence when one tokenizes to nothing.
double score_pair(const EncoderParams& params, const Vocab& vocab, std::string_view s1,
                  std::string_view s2);

// 1-based ranks; tied values share the mean of the ranks they occupy.
std::vector<double> fractional_ranks(std::span<const double> values);

// Pearson correlation of fractional ranks. Throws InvalidArgument on a length
// mismatch, fewer than two items, or a constant side.
double spearman(std::span<const double> pred, std::span<const double> gold);

// Residuals of the idiom-aware ideal for one group, S_c being the first
// correct paraphrase:
//   gap1    = 1 - sim(S_mwe, S_c)
//   gap2[j] = |sim(S_mwe, S_i[j]) - sim(S_c, S_i[j])|
struct Awareness {
  double gap1 = 0.0;
  std::vector<double> gap2;
};

Awareness awareness(const EncoderParams& params, const Vocab& vocab, const RawGroup& group);

struct AwarenessSummary {
  double gap1_mean = 0.0;
  // Mean over every incorrect paraphrase of every group.
  double gap2_mean = 0.0;
  std::size_t groups = 0;
};

AwarenessSummary summarize_awareness(const EncoderParams& params, const Vocab& vocab,
                                     std::span<const RawGroup> groups);

// A rho is absent when its cell holds fewer than two pairs.
struct CellScores {
  std::optional<double> rho_idiom;
  std::optional<double> rho_sts;
  std::optional<double> rho_all;
  std::size_t n_idiom = 0;
  std::size_t n_sts = 0;
  std::size_t n_all = 0;
};

struct EvalReport {
  CellScores overall;
  std::map<std::string, CellScores> per_language;
  std::optional<AwarenessSummary> awareness;
  // Always "first": which correct paraphrase stands in for S_c.
  std::string correct_reference = "first";
};

// Scores every pair (optionally on several threads; the result does not
// depend on the thread count) and computes rho per subset and language.
// Awareness is filled in when groups are given.
EvalReport evaluate(const EncoderParams& params, const Vocab& vocab,
                    std::span<const EvalPair> pairs, std::span<const RawGroup> groups = {},
                    std::size_t threads = 1);

}  // namespace idt
